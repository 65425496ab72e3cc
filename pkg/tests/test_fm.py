"""Inequality solving: exact elimination against the vertex-search reference,
and the oracle-driven stream mode."""

import random
from fractions import Fraction as F

import pytest

from equistream import (ContractError, ExactOracle, IneqSystem,
                        UnanswerableError, const, fm_solve_exact,
                        fm_solve_stream)
from equistream.fourier_motzkin import canonical_sign_pattern
from equistream.streams import RealStream, pow2

from helpers import box_feasible_point, rand_rational, residuals_ok


def lift(system):
    return IneqSystem([[const(x) for x in row] for row in system.rows],
                      [const(x) for x in system.rhs])


class TestExactExamples:
    def test_forced_equality(self):
        system = IneqSystem([[1], [-1]], [F(1, 2), F(-1, 2)])
        assert fm_solve_exact(system) == [F(1, 2)]

    def test_diagonal_ratio_system(self):
        system = IneqSystem([[4, 0], [-4, 0], [0, 3], [0, -3]],
                            [1, -1, 3, -3])
        assert fm_solve_exact(system) == [F(1, 4), F(1)]

    def test_infeasible_under_box(self):
        assert fm_solve_exact(IneqSystem([[1, 1]], [-1])) is None

    def test_free_variable_gets_lower_endpoint(self):
        assert fm_solve_exact(IneqSystem([[0]], [0])) == [0]

    def test_unconstrained_pair_with_coupling(self):
        system = IneqSystem([[1, -1]], [F(-1, 2)])  # v1 <= v2 - 1/2
        solution = fm_solve_exact(system)
        assert solution is not None and residuals_ok(system.rows, system.rhs, solution)


class TestExactAgainstVertexSearch:
    def test_differential_random(self):
        rng = random.Random(71)
        feasible = infeasible = 0
        for _ in range(700):
            nvars = rng.randint(1, 4)
            nrows = rng.randint(1, 6)
            rows = [[F(rng.randint(-3, 3)) for _ in range(nvars)]
                    for _ in range(nrows)]
            rhs = [F(rng.randint(-4, 4), rng.randint(1, 2)) for _ in range(nrows)]
            got = fm_solve_exact(IneqSystem(rows, rhs))
            ref = box_feasible_point(rows, rhs, nvars)
            assert (got is None) == (ref is None)
            if got is None:
                infeasible += 1
            else:
                feasible += 1
                assert residuals_ok(rows, rhs, got)
        assert feasible > 100 and infeasible > 100

    def test_equality_heavy_systems(self):
        rng = random.Random(73)
        for _ in range(200):
            nvars = rng.randint(2, 4)
            point = [F(rng.randint(0, 4), 4) for _ in range(nvars)]
            rows, rhs = [], []
            for _ in range(rng.randint(1, 3)):
                row = [F(rng.randint(-3, 3)) for _ in range(nvars)]
                b = sum(c * v for c, v in zip(row, point))
                rows += [row, [-c for c in row]]
                rhs += [b, -b]
            solution = fm_solve_exact(IneqSystem(rows, rhs))
            assert solution is not None
            assert residuals_ok(rows, rhs, solution)


class TestSignPattern:
    def test_canonical_choice(self):
        pattern = canonical_sign_pattern([F(-3), F(0), F(2), F(-2)])
        assert pattern.nonneg == frozenset({1, 2})
        assert pattern.order == (0, 2, 3, 1)


class TestStreamMode:
    def test_matches_exact_on_ratio_system(self):
        system = IneqSystem([[4, 0], [-4, 0], [0, 3], [0, -3]], [1, -1, 3, -3])
        vector = fm_solve_stream(lift(system), ExactOracle())
        assert [s.witness for s in vector] == [F(1, 4), F(1)]
        for s, target in zip(vector, (F(1, 4), F(1))):
            for i in (0, 4, 9):
                assert abs(s.approx(i) - target) <= pow2(-i)

    def test_zero_leading_coefficient_is_harmless(self):
        # One variable, one null row plus real bounds: the null row's
        # division-by-zero answer must not disturb the choice.
        system = IneqSystem([[0], [1], [-1]], [0, F(3, 4), F(-1, 4)])
        vector = fm_solve_stream(lift(system), ExactOracle())
        assert F(1, 4) <= vector[0].witness <= F(3, 4)

    def test_random_feasible_systems(self):
        rng = random.Random(79)
        for _ in range(60):
            nvars = rng.randint(1, 3)
            point = [F(rng.randint(0, 3), 3) for _ in range(nvars)]
            rows, rhs = [], []
            for _ in range(rng.randint(1, 4)):
                row = [rand_rational(rng, 3, 2) for _ in range(nvars)]
                slack = F(rng.randint(0, 2), 2)
                rows.append(row)
                rhs.append(sum(c * v for c, v in zip(row, point)) + slack)
            vector = fm_solve_stream(lift(IneqSystem(rows, rhs)), ExactOracle())
            witness = [s.witness for s in vector]
            assert residuals_ok(rows, rhs, witness)
            for s in vector:
                for i in (0, 5, 11):
                    assert abs(s.approx(i) - s.witness) <= pow2(-i)

    def test_infeasible_witnesses_rejected(self):
        system = IneqSystem([[1], [-1]], [F(1, 4), F(-1, 2)])
        with pytest.raises(ContractError):
            fm_solve_stream(lift(system), ExactOracle())

    def test_missing_witness_rejected(self):
        bare = RealStream(lambda i: F(1))
        system = IneqSystem([[bare]], [const(1)])
        with pytest.raises(UnanswerableError):
            fm_solve_stream(system, ExactOracle())
