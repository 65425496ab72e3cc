"""Discontinuity oracles: query/answer types, the exact-layer answerer, and
the reduction runner.

The continuous stream layer cannot decide questions like "which of these
inputs is the all-zero one" or "is this divisor zero".  Machines that need
such answers emit a query; :func:`exact_answer` resolves it from ground
truth (exact witnesses on number streams, decidability tags on tapes) and
never from approximations.  Multi-valued questions are resolved
deterministically: the smallest valid index, the canonical sign cover
member, the lexicographically first feasible support.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

from .errors import ArgumentError, ContractError, UnanswerableError
from .fourier_motzkin import SignPattern, canonical_sign_pattern
from .games import BiMatrixGame, first_feasible_support
from .streams import NatStream, RealStream, rdiv

#: Label reported for indices outside both tape ranges.
SEP_DEFAULT_BIT = 1


@dataclass(frozen=True)
class MlpoQuery:
    """n inputs, at least one of which is zero: all-zero tape (NatStream
    inputs) or zero-limit stream (witnessed RealStream inputs)."""

    inputs: tuple

    def __post_init__(self):
        if not self.inputs:
            raise ArgumentError("MLPO query needs at least one input")


@dataclass(frozen=True)
class RdivBatchQuery:
    """Pairs (u, v) with the witness promise 0 <= u <= v per pair."""

    pairs: tuple


@dataclass(frozen=True)
class SepQuery:
    """Which side of a disjoint-range tape pair does `index` fall on?"""

    p: NatStream
    q: NatStream
    index: int


@dataclass(frozen=True)
class CoverSelectQuery:
    """Pick a member of a named closed cover containing the instance."""

    cover: str
    instance: object


@dataclass(frozen=True)
class MlpoAnswer:
    index: int  # 1-based


@dataclass(frozen=True)
class RdivBatchAnswer:
    quotients: tuple


@dataclass(frozen=True)
class SepAnswer:
    bit: int


@dataclass(frozen=True)
class CoverSelectAnswer:
    member: object


def _answer_mlpo(query: MlpoQuery) -> MlpoAnswer:
    inputs = query.inputs
    if all(isinstance(p, NatStream) for p in inputs):
        flags = []
        for p in inputs:
            if p.eventually_constant_from is None:
                raise UnanswerableError("MLPO tape lacks the eventually-constant tag")
            flags.append(p.all_zero())
    elif all(isinstance(p, RealStream) for p in inputs):
        flags = []
        for p in inputs:
            if p.witness is None:
                raise UnanswerableError("MLPO stream input lacks a witness")
            flags.append(p.witness == 0)
    else:
        raise ArgumentError("MLPO inputs must be all tapes or all streams")
    for idx, zero in enumerate(flags):
        if zero:
            return MlpoAnswer(idx + 1)
    raise ContractError("MLPO promise violated: no zero input")


def _answer_rdiv(query: RdivBatchQuery) -> RdivBatchAnswer:
    quotients = []
    for u, v in query.pairs:
        try:
            quotients.append(rdiv(u, v))
        except ArgumentError as exc:
            if u.witness is None or v.witness is None:
                raise UnanswerableError(str(exc)) from exc
            raise ContractError(str(exc)) from exc
    return RdivBatchAnswer(tuple(quotients))


def _answer_sep(query: SepQuery) -> SepAnswer:
    for tape in (query.p, query.q):
        if not tape.membership_decidable():
            raise UnanswerableError("separation tape lacks a decidability tag")
    in_p = query.p.contains(query.index)
    in_q = query.q.contains(query.index)
    if in_p and in_q:
        raise ContractError("separation promise violated: ranges overlap at %d"
                            % query.index)
    if in_p:
        return SepAnswer(0)
    if in_q:
        return SepAnswer(1)
    return SepAnswer(SEP_DEFAULT_BIT)


def _answer_cover(query: CoverSelectQuery) -> CoverSelectAnswer:
    if query.cover == "sign-pattern":
        leading = [Fraction(x) for x in query.instance]
        return CoverSelectAnswer(canonical_sign_pattern(leading))
    if query.cover == "nash-support":
        game = query.instance
        if not isinstance(game, BiMatrixGame):
            raise ArgumentError("nash-support cover expects a game instance")
        i_set, j_set, _ = first_feasible_support(game.witness_game())
        return CoverSelectAnswer((i_set, j_set))
    raise ArgumentError("unknown cover %r" % query.cover)


def exact_answer(query):
    """Answer any oracle query from ground truth; see the module docstring."""
    if isinstance(query, MlpoQuery):
        return _answer_mlpo(query)
    if isinstance(query, RdivBatchQuery):
        return _answer_rdiv(query)
    if isinstance(query, SepQuery):
        return _answer_sep(query)
    if isinstance(query, CoverSelectQuery):
        return _answer_cover(query)
    raise ArgumentError("unrecognized oracle query %r" % (query,))


def run_reduction(pre: Callable, oracle: Callable, post: Callable, value):
    """Compose a reduction: continuous pre-processing, one oracle call,
    continuous post-processing on the original input and the answer."""
    return post(value, oracle(pre(value)))


class ExactOracle:
    """Named query surface over an answer function (default: exact_answer).

    Solvers talk to this adapter so that every discontinuous step funnels
    through a single replaceable answering function.
    """

    def __init__(self, answer: Callable = exact_answer):
        self._answer = answer

    def sign_pattern(self, leading: Sequence[Fraction]) -> SignPattern:
        return self._answer(CoverSelectQuery("sign-pattern", tuple(leading))).member

    def nash_support(self, game: BiMatrixGame):
        return self._answer(CoverSelectQuery("nash-support", game)).member

    def rdiv_batch(self, pairs) -> list:
        return list(self._answer(RdivBatchQuery(tuple(pairs))).quotients)

    def mlpo(self, inputs) -> int:
        return self._answer(MlpoQuery(tuple(inputs))).index

    def sep_bit(self, p: NatStream, q: NatStream, index: int) -> int:
        return self._answer(SepQuery(p, q, index)).bit
