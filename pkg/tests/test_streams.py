"""Stream layer: modulus guarantees, arithmetic, robust division, game names."""

import random
from fractions import Fraction as F

import pytest

from equistream import (ArgumentError, BiMatrixGame, FormatError, GammaName,
                        NatStream, RealStream, const, decode_gamma,
                        encode_gamma, mp_gadget, rdiv, semitest_gt)
from equistream.streams import (absolute, add, lift_binary, lift_unary,
                                maximum, minimum, mul, neg, pow2, scale_pow2,
                                sub)

from helpers import rand_game, rand_rational


def assert_pairwise_modulus(stream, depth=64, step=7):
    stages = list(range(0, depth + 1, step)) + [depth]
    values = {i: stream.approx(i) for i in stages}
    for i in stages:
        for j in stages:
            assert abs(values[i] - values[j]) <= pow2(-i) + pow2(-j), (i, j)


def assert_witness_modulus(stream, depth=64, step=7):
    w = stream.witness
    assert w is not None
    for i in list(range(0, depth + 1, step)) + [depth]:
        assert abs(stream.approx(i) - w) <= pow2(-i), i


class TestConst:
    def test_zero(self):
        s = const(0)
        assert s.witness == 0
        assert all(s.approx(i) == 0 for i in range(5))

    def test_half(self):
        assert const(F(1, 2)).approx(10) == F(1, 2)

    def test_negative(self):
        assert_witness_modulus(const(-3))


class TestArithmetic:
    def test_add(self):
        s = add(const(F(1, 4)), const(F(1, 4)))
        assert s.witness == F(1, 2)
        assert_witness_modulus(s)

    def test_scale_pow2(self):
        s = scale_pow2(const(1), 2)
        assert s.witness == F(1, 4)
        s_up = scale_pow2(const(F(1, 4)), -2)
        assert s_up.witness == 1
        assert_witness_modulus(s_up)

    def test_abs(self):
        assert absolute(const(F(-2, 3))).witness == F(2, 3)

    def test_lift_dispatch(self):
        a, b = const(2), const(F(1, 3))
        assert lift_binary("sub", a, b).witness == F(5, 3)
        assert lift_binary("min", a, b).witness == F(1, 3)
        assert lift_binary("max", a, b).witness == 2
        assert lift_unary("neg", a).witness == -2
        assert lift_unary("scale_pow2", a, k=1).witness == 1
        with pytest.raises(ArgumentError):
            lift_binary("mul", a, b)

    def test_operator_overloads(self):
        a, b = const(F(3, 2)), const(F(1, 2))
        assert (a + b).witness == 2
        assert (a - b).witness == 1
        assert (a * b).witness == F(3, 4)
        assert (-a).witness == F(-3, 2)
        assert abs(-a).witness == F(3, 2)

    def test_random_expressions_keep_modulus_and_witness(self):
        rng = random.Random(43)
        ops = ["add", "sub", "min", "max"]
        for _ in range(60):
            a = const(rand_rational(rng))
            b = const(rand_rational(rng))
            stream = lift_binary(rng.choice(ops), mul(a, b), sub(a, b))
            assert_witness_modulus(stream)
            assert_pairwise_modulus(stream)

    def test_jittered_name_arithmetic(self):
        # Non-constant names: stage i carries an admissible 2**-(i+1) error.
        def jitter(q, sign):
            return RealStream(lambda i: q + sign * pow2(-i - 1), witness=q)

        rng = random.Random(47)
        for _ in range(40):
            qa, qb = rand_rational(rng), rand_rational(rng)
            a = jitter(qa, 1)
            b = jitter(qb, -1)
            for stream, limit in ((add(a, b), qa + qb), (mul(a, b), qa * qb),
                                  (minimum(a, b), min(qa, qb))):
                assert stream.witness == limit
                assert_witness_modulus(stream, depth=40, step=5)


class TestSemitest:
    def test_certified(self):
        assert semitest_gt(const(1), 0, 2)

    def test_zero_never_certified(self):
        assert not any(semitest_gt(const(0), 0, i) for i in range(20))

    def test_threshold_stage(self):
        a = const(F(1, 8))
        assert not semitest_gt(a, 0, 2)
        assert semitest_gt(a, 0, 4)


class TestRdiv:
    def test_simple_quotient(self):
        q = rdiv(const(1), const(2))
        assert q.witness == F(1, 2)
        assert_witness_modulus(q)

    def test_zero_divisor_is_zero_name(self):
        q = rdiv(const(0), const(0))
        assert q.witness == 0
        assert_pairwise_modulus(q)

    def test_stagewise_error_bound(self):
        q = rdiv(const(1), const(3))
        for i in range(33):
            assert abs(q.approx(i) - F(1, 3)) <= pow2(-i)

    def test_jittered_inputs(self):
        rng = random.Random(53)
        for _ in range(40):
            u_val = rand_rational(rng) ** 2
            v_val = u_val + rand_rational(rng) ** 2
            u = RealStream(lambda i, q=u_val: q + pow2(-i - 2), witness=u_val)
            v = RealStream(lambda i, q=v_val: q - pow2(-i - 2), witness=v_val)
            q = rdiv(u, v)
            if v_val > 0:
                target = u_val / v_val
                for i in (0, 3, 9, 17, 33, 64):
                    assert abs(q.approx(i) - target) <= pow2(-i)
            else:
                assert_pairwise_modulus(q)

    def test_contract_violations(self):
        with pytest.raises(ArgumentError):
            rdiv(const(2), const(1))
        with pytest.raises(ArgumentError):
            rdiv(const(-1), const(1))
        with pytest.raises(ArgumentError):
            rdiv(RealStream(lambda i: F(1)), const(2))


class TestNatStream:
    def test_from_prefix(self):
        t = NatStream.from_prefix([0, 0, 7], tail=7)
        assert t.prefix(5) == [0, 0, 7, 7, 7]
        assert not t.all_zero()
        assert t.first_nonzero() == 2

    def test_zeros(self):
        t = NatStream.zeros()
        assert t.all_zero()
        assert t.first_nonzero() is None

    def test_membership(self):
        t = NatStream.from_prefix([4, 9], tail=0)
        assert t.contains(9) and t.contains(0) and not t.contains(5)
        evens = NatStream(lambda i: 2 * i, membership=lambda v: v % 2 == 0)
        assert evens.contains(10) and not evens.contains(3)

    def test_untagged_is_undecidable(self):
        bare = NatStream(lambda i: i)
        assert not bare.membership_decidable()
        with pytest.raises(ArgumentError):
            bare.all_zero()
        with pytest.raises(ArgumentError):
            bare.contains(3)


class TestGammaNames:
    def test_header_of_2x2(self):
        name = encode_gamma(mp_gadget(1, 1))
        assert name.header_prefix() == [0, 0, 1, 1, 0]

    def test_parse_header(self):
        assert GammaName.parse_header([0, 0, 1, 1, 0, 9, 9]) == (2, 2, 5)
        assert GammaName.parse_header([0, 1, 0]) == (1, 1, 3)

    def test_malformed_headers(self):
        with pytest.raises(FormatError):
            GammaName.parse_header([1, 1, 0])          # zero rows
        with pytest.raises(FormatError):
            GammaName.parse_header([0, 0, 0])          # zero columns
        with pytest.raises(FormatError):
            GammaName.parse_header([0, 1, 1])          # missing closing 0

    def test_round_trip_exact(self):
        g = BiMatrixGame([[F(5)]], [[F(-5)]])
        assert decode_gamma(encode_gamma(g), 0) == g
        g2 = mp_gadget(F(1, 3), F(7, 2))
        assert decode_gamma(encode_gamma(g2), 0) == g2

    def test_round_trip_random(self):
        rng = random.Random(59)
        for _ in range(1000):
            g = rand_game(rng, rng.randint(1, 4), rng.randint(1, 4))
            assert decode_gamma(encode_gamma(g), rng.randint(0, 3)) == g

    def test_body_layout_interleaves_components(self):
        g = BiMatrixGame([[1, 2], [3, 4]], [[5, 6], [7, 8]])
        name = encode_gamma(g)
        per_stage = 4
        # Column-major component order: (1,1), (2,1), (1,2), (2,2).
        expected_a = [F(1), F(3), F(2), F(4)]
        expected_b = [F(5), F(7), F(6), F(8)]
        for stage in (0, 2):
            for c in range(per_stage):
                pos = 2 * (per_stage * stage + c)
                assert name.body(pos) == expected_a[c]
                assert name.body(pos + 1) == expected_b[c]

    def test_decode_precision_snapshot(self):
        # Non-constant entry streams: the stage-p snapshot is 2**-p close.
        wobble = RealStream(lambda i: F(1) + pow2(-i - 1), witness=1)
        name = GammaName(1, 1, [[wobble]], [[const(0)]])
        for p in (0, 2, 5):
            snap = decode_gamma(name, p)
            assert abs(snap.a[0][0] - 1) <= pow2(-p)
