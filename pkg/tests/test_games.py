"""Exact game layer: verifiers, enumeration, and the ground-truth solver."""

import random
from fractions import Fraction as F

import pytest

from equistream import (ArgumentError, BiMatrixGame, CorrelatedMatrix,
                        MixedProfile, enumerate_pure, is_correlated, is_nash,
                        is_pure_equilibrium, mp_gadget, solve_nash_bruteforce)
from equistream.games import first_feasible_support, support_pairs

from helpers import rand_game, rand_simplex


def coordination():
    return BiMatrixGame([[1, 0], [0, 0]], [[1, 0], [0, 0]])


class TestPureEquilibrium:
    def test_maximal_cell(self):
        assert is_pure_equilibrium(coordination(), 1, 1)

    def test_matching_pennies_has_none(self):
        assert not is_pure_equilibrium(mp_gadget(1, 1), 1, 1)

    def test_singleton_game(self):
        g = BiMatrixGame([[F(5)]], [[F(-5)]])
        assert is_pure_equilibrium(g, 1, 1)

    def test_index_out_of_range(self):
        with pytest.raises(ArgumentError):
            is_pure_equilibrium(coordination(), 0, 1)
        with pytest.raises(ArgumentError):
            is_pure_equilibrium(coordination(), 1, 3)


class TestEnumeratePure:
    def test_matching_pennies_empty(self):
        assert enumerate_pure(mp_gadget(1, 1)) == []

    def test_coordination(self):
        assert enumerate_pure(coordination()) == [(1, 1), (2, 2)]

    def test_all_zero_game(self):
        g = BiMatrixGame([[0, 0], [0, 0]], [[0, 0], [0, 0]])
        assert enumerate_pure(g) == [(1, 1), (1, 2), (2, 1), (2, 2)]

    def test_agrees_with_argmax_rescan(self):
        rng = random.Random(101)
        for _ in range(1000):
            n, m = rng.randint(1, 4), rng.randint(1, 4)
            g = rand_game(rng, n, m, num=3, den=2)
            expected = []
            for i in range(n):
                for j in range(m):
                    col_max = max(g.a[k][j] for k in range(n))
                    row_max = max(g.b[i][l] for l in range(m))
                    if g.a[i][j] == col_max and g.b[i][j] == row_max:
                        expected.append((i + 1, j + 1))
            assert enumerate_pure(g) == expected


class TestIsNash:
    def test_gadget_closed_form(self):
        g = mp_gadget(1, 3)
        assert is_nash(g, MixedProfile([F(3, 4), F(1, 4)], [F(3, 4), F(1, 4)]))

    def test_pure_profile_on_gadget_rejected(self):
        g = mp_gadget(1, 1)
        assert not is_nash(g, MixedProfile([1, 0], [1, 0]))

    def test_pure_equilibria_lift(self):
        rng = random.Random(7)
        for _ in range(100):
            g = rand_game(rng, rng.randint(1, 3), rng.randint(1, 3))
            for i, j in enumerate_pure(g):
                x = [F(1) if k == i else F(0) for k in range(1, g.rows + 1)]
                y = [F(1) if l == j else F(0) for l in range(1, g.cols + 1)]
                assert is_nash(g, MixedProfile(x, y))

    def test_dimension_mismatch(self):
        with pytest.raises(ArgumentError):
            is_nash(coordination(), MixedProfile([1], [1, 0]))


class TestIsCorrelated:
    def test_product_of_nash_is_correlated(self):
        g = mp_gadget(1, 3)
        p = solve_nash_bruteforce(g)
        c = CorrelatedMatrix([[p.x[i] * p.y[j] for j in range(2)]
                              for i in range(2)])
        assert is_correlated(g, c)

    def test_point_mass_on_gadget_rejected(self):
        assert not is_correlated(mp_gadget(1, 1),
                                 CorrelatedMatrix([[1, 0], [0, 0]]))

    def test_singleton(self):
        g = BiMatrixGame([[F(2)]], [[F(3)]])
        assert is_correlated(g, CorrelatedMatrix([[1]]))

    def test_pure_equilibrium_point_mass(self):
        rng = random.Random(13)
        for _ in range(100):
            g = rand_game(rng, 2, 2)
            for i, j in enumerate_pure(g):
                cells = [[F(0)] * 2 for _ in range(2)]
                cells[i - 1][j - 1] = F(1)
                assert is_correlated(g, CorrelatedMatrix(cells))


class TestProfileValidation:
    def test_negative_weight(self):
        with pytest.raises(ArgumentError):
            MixedProfile([F(3, 2), F(-1, 2)], [1, 0])

    def test_sum_not_one(self):
        with pytest.raises(ArgumentError):
            MixedProfile([F(1, 2), F(1, 3)], [1, 0])

    def test_correlated_total(self):
        with pytest.raises(ArgumentError):
            CorrelatedMatrix([[F(1, 2), F(1, 4)], [F(1, 8), F(1, 16)]])


class TestSolveNashBruteforce:
    def test_gadget_values(self):
        assert solve_nash_bruteforce(mp_gadget(1, 1)) == MixedProfile(
            [F(1, 2), F(1, 2)], [F(1, 2), F(1, 2)])
        assert solve_nash_bruteforce(mp_gadget(2, 6)) == MixedProfile(
            [F(3, 4), F(1, 4)], [F(3, 4), F(1, 4)])

    def test_coordination_prefers_first_support(self):
        assert solve_nash_bruteforce(coordination()) == MixedProfile(
            [1, 0], [1, 0])

    def test_support_order(self):
        pairs = support_pairs(2, 2)
        assert pairs[0] == ((1,), (1,))
        sizes = [len(i) + len(j) for i, j in pairs]
        assert sizes == sorted(sizes)

    def test_every_output_is_nash(self):
        rng = random.Random(23)
        for _ in range(150):
            g = rand_game(rng, rng.randint(1, 3), rng.randint(1, 3))
            assert is_nash(g, solve_nash_bruteforce(g))

    def test_first_feasible_support_is_reported(self):
        i_set, j_set, _ = first_feasible_support(coordination())
        assert (i_set, j_set) == ((1,), (1,))

    def test_nash_product_matrix_is_correlated(self):
        rng = random.Random(29)
        for _ in range(100):
            g = rand_game(rng, 2, 2)
            p = solve_nash_bruteforce(g)
            c = CorrelatedMatrix([[p.x[i] * p.y[j] for j in range(g.cols)]
                                  for i in range(g.rows)])
            assert is_correlated(g, c)


def test_random_profiles_usually_fail_verification():
    rng = random.Random(31)
    rejected = 0
    for _ in range(50):
        g = rand_game(rng, 3, 3)
        p = MixedProfile(rand_simplex(rng, 3), rand_simplex(rng, 3))
        rejected += not is_nash(g, p)
    assert rejected > 30
