"""Executable reduction machines between the problems of this package.

Each machine is a :class:`ReductionSpec`: a continuous pre-processor that
turns the input into one oracle query, the oracle kind, and a continuous
post-processor combining the input with the answer.  ``run`` wires a spec to
an answer function (by default the exact-layer one for its kind).

The machines only ever read input *approximations* in the data they emit;
exact witnesses and tape tags are consulted solely to attach ground truth
(witnesses, decidability tags) that the answering oracle needs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

from .algebra import mp_gadget
from .errors import ArgumentError, ContractError, InternalError, UnanswerableError
from .fourier_motzkin import IneqSystem, fm_solve_stream
from .games import BiMatrixGame, StreamCorrelated
from .oracles import (ExactOracle, MlpoQuery, RdivBatchQuery, SepQuery,
                      exact_answer)
from .solvers import solve_correlated, solve_1pure
from .streams import (NatStream, RealStream, absolute, add, const, pow2,
                      positivity_stage, sub)

_SCAN_LIMIT = 100_000


@dataclass(frozen=True)
class ReductionSpec:
    """One oracle-call reduction: output = post(input, oracle(pre(input)))."""

    name: str
    oracle_kind: str
    pre: Callable
    post: Callable


def run(spec: ReductionSpec, value, oracle: Callable = None):
    from .oracles import run_reduction

    if oracle is None:
        oracle = default_oracle(spec.oracle_kind)
    return run_reduction(spec.pre, oracle, spec.post, value)


# ---------------------------------------------------------------------------
# Pairing helpers
# ---------------------------------------------------------------------------

def cantor_pair(i: int, j: int) -> int:
    s = i + j
    return s * (s + 1) // 2 + j


def cantor_unpair(t: int) -> tuple:
    s = (math.isqrt(8 * t + 1) - 1) // 2
    j = t - s * (s + 1) // 2
    return s - j, j


# ---------------------------------------------------------------------------
# Tape <-> stream converters
# ---------------------------------------------------------------------------

def _require_tag(tape: NatStream) -> None:
    if tape.eventually_constant_from is None:
        raise UnanswerableError("machine input tape lacks the eventually-constant tag")


def _freeze_stream(tape: NatStream, value_sign: int) -> RealStream:
    """0 while the tape reads zeros; frozen at sign*2**-(t+1) once the first
    nonzero shows up at position t.  A valid name either way, and its limit
    is 0 exactly for the all-zero tape."""
    _require_tag(tape)

    def fn(s: int) -> Fraction:
        for t in range(s + 1):
            if tape.entry(t) != 0:
                return value_sign * pow2(-t - 1)
        return Fraction(0)

    first = tape.first_nonzero()
    witness = Fraction(0) if first is None else value_sign * pow2(-first - 1)
    return RealStream(fn, witness=witness)


def _latched_tape(cert: Callable[[int], bool], fires: bool) -> NatStream:
    """Tape that is 0 until `cert` first holds and 1 from then on.

    `fires` is the ground-truth answer to "does it ever hold"; it only fixes
    the eventually-constant tag, never the entries.
    """
    def fn(s: int) -> int:
        return 1 if any(cert(t) for t in range(s + 1)) else 0

    if not fires:
        return NatStream(fn, eventually_constant_from=0)
    for s in range(_SCAN_LIMIT):
        if cert(s):
            return NatStream(fn, eventually_constant_from=s)
    raise InternalError("certificate never fired although ground truth says it must")


def _witness_of(stream: RealStream) -> Fraction:
    if stream.witness is None:
        raise UnanswerableError("machine input stream lacks a witness")
    return stream.witness


# ---------------------------------------------------------------------------
# Zero detection <-> single-player solving
# ---------------------------------------------------------------------------

def mlpo_to_1pure(n: int) -> ReductionSpec:
    """Find an all-zero tape among n by solving one n-action game.

    Tapes become payoff streams via :func:`_freeze_stream` with negative
    freeze values, so a payoff is maximal (namely 0) exactly when its tape is
    all-zero; the single-player solver's answer is returned unchanged.
    """
    def pre(tapes: Sequence[NatStream]):
        tapes = list(tapes)
        if len(tapes) != n:
            raise ArgumentError("expected %d tapes, got %d" % (n, len(tapes)))
        for tape in tapes:
            _require_tag(tape)
        if not any(tape.all_zero() for tape in tapes):
            raise ContractError("no all-zero tape among the inputs")
        return [_freeze_stream(tape, -1) for tape in tapes]

    def post(tapes, index: int) -> int:
        return index

    return ReductionSpec("mlpo_to_1pure", "one_pure", pre, post)


def one_pure_to_mlpo(n: int) -> ReductionSpec:
    """Find a maximal payoff among n streams via one zero-detection call.

    Output tape k stays 0 while no stage certifies that some other payoff
    beats payoff k by more than twice the stage tolerance, and latches to 1
    once one does; a tape is all-zero exactly when its payoff is maximal.
    """
    def pre(payoffs: Sequence[RealStream]):
        payoffs = [p if isinstance(p, RealStream) else const(p) for p in payoffs]
        if len(payoffs) != n:
            raise ArgumentError("expected %d payoffs, got %d" % (n, len(payoffs)))
        witnesses = [_witness_of(p) for p in payoffs]
        top = max(witnesses)

        tapes = []
        for i, p in enumerate(payoffs):
            others = [q for j, q in enumerate(payoffs) if j != i]

            def cert(s: int, p=p, others=others) -> bool:
                margin = p.approx(s) + pow2(1 - s)
                return any(q.approx(s) > margin for q in others)

            tapes.append(_latched_tape(cert, witnesses[i] != top))
        return MlpoQuery(tuple(tapes))

    def post(payoffs, index: int) -> int:
        return index

    return ReductionSpec("one_pure_to_mlpo", "mlpo", pre, post)


def pure_via_mlpo2_products(n: int) -> ReductionSpec:
    """Maximal entry among n+1 payoffs via n parallel two-tape zero tests.

    Pair k compares payoff k against all later ones: its first tape latches
    on a certificate that some later entry strictly beats entry k, its second
    on a certificate that entry k strictly beats all later entries.  At most
    one of the two can ever latch, so each pair is a valid zero-detection
    instance.  Answers are scanned left to right: the first pair answering
    "first tape is zero" names a maximal entry; if every pair answers
    "second", the last entry is maximal.
    """
    def pre(payoffs: Sequence[RealStream]):
        payoffs = [p if isinstance(p, RealStream) else const(p) for p in payoffs]
        if len(payoffs) != n + 1:
            raise ArgumentError("expected %d payoffs, got %d" % (n + 1, len(payoffs)))
        witnesses = [_witness_of(p) for p in payoffs]

        queries = []
        for k in range(n):
            mine = payoffs[k]
            later = payoffs[k + 1:]

            def beaten(s: int, mine=mine, later=later) -> bool:
                margin = mine.approx(s) + pow2(1 - s)
                return any(q.approx(s) > margin for q in later)

            def dominant(s: int, mine=mine, later=later) -> bool:
                mark = mine.approx(s) - pow2(1 - s)
                return all(q.approx(s) < mark for q in later)

            later_w = witnesses[k + 1:]
            tape_a = _latched_tape(beaten, any(w > witnesses[k] for w in later_w))
            tape_b = _latched_tape(dominant, all(w < witnesses[k] for w in later_w))
            queries.append(MlpoQuery((tape_a, tape_b)))
        return queries

    def post(payoffs, answers: Sequence[int]) -> int:
        for k, answer in enumerate(answers):
            if answer == 1:
                return k + 1
        return n + 1

    return ReductionSpec("pure_via_mlpo2_products", "mlpo-batch", pre, post)


# ---------------------------------------------------------------------------
# Zero detection via robust division
# ---------------------------------------------------------------------------

def mlpo2_via_rdiv() -> ReductionSpec:
    """Two-tape zero detection from a single robust division.

    The tapes become nonnegative frozen streams u and w; the query asks for
    u / (u + w).  A stage certifying quotient < 1 proves the first tape is
    the zero one, a stage certifying quotient > 0 proves the second is; for
    a valid name one of the certificates fires within two stages.
    """
    def pre(tapes):
        tape_a, tape_b = tapes
        ra = _freeze_stream(tape_a, 1)
        rb = _freeze_stream(tape_b, 1)
        u = absolute(ra)
        return RdivBatchQuery(((u, add(u, absolute(rb))),))

    def post(tapes, quotients) -> int:
        stream = quotients[0]
        for s in range(65):
            value = stream.approx(s)
            tol = pow2(-s)
            if value + tol < 1:
                return 1
            if value - tol > 0:
                return 2
        raise InternalError("quotient stream certified neither side")

    return ReductionSpec("mlpo2_via_rdiv", "rdiv", pre, post)


def rdiv_via_blinineq(n: int) -> ReductionSpec:
    """n robust divisions folded into one box-feasibility instance.

    The diagonal system q_i * v_i = p_i (two inequalities per pair) forces
    v_i = p_i / q_i whenever q_i > 0 and leaves v_i free in [0, 1] otherwise.
    """
    def pre(pairs):
        pairs = [(u if isinstance(u, RealStream) else const(u),
                  v if isinstance(v, RealStream) else const(v))
                 for u, v in pairs]
        if len(pairs) != n:
            raise ArgumentError("expected %d pairs, got %d" % (n, len(pairs)))
        for u, v in pairs:
            if not (0 <= _witness_of(u) <= _witness_of(v)):
                raise ContractError("pair violates 0 <= p <= q on witnesses")
        zero = const(0)
        rows, rhs = [], []
        for i, (p, q) in enumerate(pairs):
            row = [zero] * n
            row[i] = q
            rows.append(row)
            rhs.append(p)
            row = [zero] * n
            row[i] = -q
            rows.append(row)
            rhs.append(-p)
        return IneqSystem(rows, rhs)

    def post(pairs, vector):
        return list(vector)

    return ReductionSpec("rdiv_via_blinineq", "blinineq", pre, post)


# ---------------------------------------------------------------------------
# Robust division via range separation
# ---------------------------------------------------------------------------

def _dyadic_net(i: int, j: int) -> Fraction:
    return Fraction(j, 2 ** (i + 1))


def net_size(i: int) -> int:
    """Number of stage-i candidate approximants (the dyadic net of [0, 1])."""
    return 2 ** (i + 1) + 1


class SepEncoding:
    """The two output tapes of the division-to-separation encoder.

    Mode 1 writes the fillers (1 on the first tape, 2 on the second) while
    probing the divisor for a positivity certificate.  After certification
    at stage i0, step t of mode 2 decides pair (i, j) = unpair(t): candidate
    j*2**-(i+1) is accepted when it is within 2**-(i+1) of the clamped
    quotient estimate read at input stage i + 2*i0 + 3; the step's marker
    value t + 3 goes on the second tape when accepted, on the first when
    not.  Acceptance of a pair is a function of the pair alone, which gives
    both tapes a decidable range membership test.
    """

    def __init__(self, a: RealStream, b: RealStream):
        wa, wb = _witness_of(a), _witness_of(b)
        if not (0 <= wa <= wb):
            raise ContractError("encoder needs 0 <= a <= b on witnesses")
        self.a = a
        self.b = b
        self.cert_stage = positivity_stage(b) if wb > 0 else None

    def accepted(self, i: int, j: int) -> bool:
        if self.cert_stage is None or not 0 <= j <= 2 ** (i + 1):
            return False
        k = i + 2 * self.cert_stage + 3
        estimate = self.a.approx(k) / self.b.approx(k)
        clamped = min(Fraction(1), max(Fraction(0), estimate))
        return abs(clamped - _dyadic_net(i, j)) < pow2(-i - 1)

    def marker_accepted(self, value: int) -> bool:
        if value < 3:
            return False
        return self.accepted(*cantor_unpair(value - 3))

    def tapes(self) -> tuple:
        filler_steps = 1 if self.cert_stage is None else self.cert_stage + 1

        def make(tape_yes: bool) -> NatStream:
            filler = 2 if tape_yes else 1
            written: list = []
            step = [0]

            def fn(s: int) -> int:
                if self.cert_stage is None or s < filler_steps:
                    return filler
                while len(written) <= s - filler_steps:
                    t = step[0]
                    step[0] += 1
                    if self.accepted(*cantor_unpair(t)) == tape_yes:
                        written.append(t + 3)
                return written[s - filler_steps]

            def member(value: int) -> bool:
                if value == filler:
                    return True
                if value < 3 or self.cert_stage is None:
                    return False
                return self.marker_accepted(value) == tape_yes

            return NatStream(fn, membership=member)

        return make(False), make(True)


def _sep_decode(bits: Callable[[int], int], witness: Fraction) -> RealStream:
    """Reconstruct a quotient name from separation bits.

    Stage i scans the stage-i candidates in increasing order and prints the
    first one whose marker is labelled 1, repeating the previous output (1
    before any output) when none is.  Accepted candidates form one
    contiguous run within 2**-i of the limit, and the previous output is
    within 2**-(i-1) of it, so scanning the window of radius 2**-(i+2)
    around the previous output finds exactly the first accepted candidate
    without touching the exponentially many others.
    """
    values: list = []

    def stage_value(i: int) -> Fraction:
        while len(values) <= i:
            s = len(values)
            prev = values[-1] if values else None
            denominator = 2 ** (s + 1)
            if prev is None:
                lo, hi = 0, denominator
            else:
                radius = pow2(-s + 2)
                lo = max(0, math.floor((prev - radius) * denominator))
                hi = min(denominator, math.ceil((prev + radius) * denominator))
            found = None
            for j in range(lo, hi + 1):
                if bits(3 + cantor_pair(s, j)) == 1:
                    found = _dyadic_net(s, j)
                    break
            if found is None:
                found = prev if prev is not None else Fraction(1)
            values.append(found)
        return values[i]

    return RealStream(stage_value, witness=witness)


def rdiv_via_sep() -> ReductionSpec:
    """Robust division answered by a range-separation oracle."""
    def pre(operands):
        a, b = operands
        a = a if isinstance(a, RealStream) else const(a)
        b = b if isinstance(b, RealStream) else const(b)
        return SepEncoding(a, b).tapes()

    def post(operands, bits) -> RealStream:
        a, b = operands
        wa = a.witness if isinstance(a, RealStream) else Fraction(a)
        wb = b.witness if isinstance(b, RealStream) else Fraction(b)
        witness = wa / wb if wb > 0 else Fraction(0)
        return _sep_decode(bits, witness)

    return ReductionSpec("rdiv_via_sep", "sep", pre, post)


def sep_pair_merge() -> ReductionSpec:
    """Two separation instances answered through a single merged one.

    The merged tapes interleave the doubled first-instance values on even
    positions with the doubled-plus-one second-instance values on odd ones;
    the answer for instance one at v is the merged bit at 2v, for instance
    two at 2v + 1.
    """
    def _merge(s1: NatStream, s2: NatStream) -> NatStream:
        def fn(k: int) -> int:
            half, odd = divmod(k, 2)
            return 2 * s2.entry(half) + 1 if odd else 2 * s1.entry(half)

        def member(value: int) -> bool:
            half, odd = divmod(value, 2)
            return s2.contains(half) if odd else s1.contains(half)

        return NatStream(fn, membership=member)

    def pre(instances):
        (p1, q1), (p2, q2) = instances
        return _merge(p1, p2), _merge(q1, q2)

    def post(instances, bits):
        return (lambda v: bits(2 * v)), (lambda v: bits(2 * v + 1))

    return ReductionSpec("sep_pair_merge", "sep", pre, post)


# ---------------------------------------------------------------------------
# Robust division via a 2x2 zero-sum game
# ---------------------------------------------------------------------------

def rdiv_via_zcorr22() -> ReductionSpec:
    """Robust division by asking for a correlated equilibrium of a gadget.

    For 0 <= a <= b the gadget is the diagonal game with entries (b-a, a):
    its correlated equilibria put total mass a/b on the first column whenever
    b > 0, so the first-column cell sum of the oracle's answer is the
    quotient.
    """
    def pre(operands):
        a, b = operands
        a = a if isinstance(a, RealStream) else const(a)
        b = b if isinstance(b, RealStream) else const(b)
        if not (0 <= _witness_of(a) <= _witness_of(b)):
            raise ContractError("division gadget needs 0 <= a <= b on witnesses")
        return mp_gadget(sub(b, a), a)

    def post(operands, correlated: StreamCorrelated) -> RealStream:
        return add(correlated.c[0][0], correlated.c[1][0])

    return ReductionSpec("rdiv_via_zcorr22", "zcorr22", pre, post)


# ---------------------------------------------------------------------------
# Default oracle realizations
# ---------------------------------------------------------------------------

def _one_pure_answer(payoffs) -> int:
    return solve_1pure([_witness_of(p) for p in payoffs], mode="exact")


def _zcorr22_answer(game: BiMatrixGame) -> StreamCorrelated:
    exact = solve_correlated(game.witness_game(), mode="exact")
    return StreamCorrelated([[const(x) for x in row] for row in exact.c])


def default_oracle(kind: str) -> Callable:
    """The exact-layer answer function for a machine's oracle kind."""
    if kind == "one_pure":
        return _one_pure_answer
    if kind == "mlpo":
        return lambda query: exact_answer(query).index
    if kind == "mlpo-batch":
        return lambda queries: [exact_answer(q).index for q in queries]
    if kind == "rdiv":
        return lambda query: exact_answer(query).quotients
    if kind == "blinineq":
        return lambda system: fm_solve_stream(system, ExactOracle())
    if kind == "sep":
        return lambda tapes: (
            lambda index: exact_answer(SepQuery(tapes[0], tapes[1], index)).bit)
    if kind == "zcorr22":
        return _zcorr22_answer
    raise ArgumentError("unknown oracle kind %r" % kind)


#: Machine factories by name, with the argument each factory needs.
CATALOG = {
    "mlpo_to_1pure": mlpo_to_1pure,
    "one_pure_to_mlpo": one_pure_to_mlpo,
    "pure_via_mlpo2_products": pure_via_mlpo2_products,
    "mlpo2_via_rdiv": mlpo2_via_rdiv,
    "rdiv_via_blinineq": rdiv_via_blinineq,
    "rdiv_via_sep": rdiv_via_sep,
    "sep_pair_merge": sep_pair_merge,
    "rdiv_via_zcorr22": rdiv_via_zcorr22,
}
