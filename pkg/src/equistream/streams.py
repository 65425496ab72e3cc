"""Rational approximation streams with a guaranteed convergence modulus.

A :class:`RealStream` describes a real number by a total function
``stage -> Fraction`` whose stage-``i`` value is within ``2**-i`` of the
described number.  Streams may carry an exact rational *witness* (the limit,
when it is known); witnesses are never used by the continuous arithmetic
below, only propagated, so that discontinuous steps elsewhere in the package
can consult them as ground truth.

:class:`NatStream` is the natural-number analogue (no modulus).  Tapes that
are handed to decision oracles carry decidability tags: either an
eventually-constant index or a membership test for their range.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Optional, Sequence

from .errors import ArgumentError, FormatError, InternalError

Rational = Fraction

#: Hard cap on unbounded certification scans.  Scans are only started when a
#: witness guarantees termination; the cap turns a lying witness into an
#: exception instead of a hang.
_SCAN_LIMIT = 100_000


def pow2(k: int) -> Fraction:
    """2**k as an exact fraction, for any integer k."""
    if k >= 0:
        return Fraction(2 ** k)
    return Fraction(1, 2 ** (-k))


class RealStream:
    """Lazy sequence of rationals with the 2**-i convergence guarantee.

    Stage values are memoized; the stage function must be deterministic, so
    concurrent evaluation is safe (recomputation yields the same value).
    """

    __slots__ = ("_fn", "witness", "_memo")

    def __init__(self, fn: Callable[[int], Fraction], witness=None):
        self._fn = fn
        self.witness = None if witness is None else Fraction(witness)
        self._memo: dict[int, Fraction] = {}

    def approx(self, stage: int) -> Fraction:
        if stage < 0:
            raise ArgumentError("stage must be a natural number, got %r" % (stage,))
        value = self._memo.get(stage)
        if value is None:
            value = Fraction(self._fn(stage))
            self._memo[stage] = value
        return value

    def has_witness(self) -> bool:
        return self.witness is not None

    def __add__(self, other):
        return add(self, _coerce(other))

    __radd__ = __add__

    def __sub__(self, other):
        return sub(self, _coerce(other))

    def __rsub__(self, other):
        return sub(_coerce(other), self)

    def __mul__(self, other):
        return mul(self, _coerce(other))

    __rmul__ = __mul__

    def __neg__(self):
        return neg(self)

    def __abs__(self):
        return absolute(self)

    def __repr__(self):
        if self.witness is not None:
            return "RealStream(witness=%s)" % self.witness
        return "RealStream(q0=%s)" % self.approx(0)


def _coerce(value) -> RealStream:
    if isinstance(value, RealStream):
        return value
    return const(value)


def const(q) -> RealStream:
    """The constant stream of ``q``; a name of ``q`` with itself as witness."""
    q = Fraction(q)
    return RealStream(lambda i: q, witness=q)


def _propagate(op, a: RealStream, b: RealStream) -> Optional[Fraction]:
    if a.witness is None or b.witness is None:
        return None
    return op(a.witness, b.witness)


def add(a: RealStream, b: RealStream) -> RealStream:
    # Stage i+1 of both inputs: the two 2**-(i+1) errors sum to 2**-i.
    return RealStream(lambda i: a.approx(i + 1) + b.approx(i + 1),
                      witness=_propagate(lambda x, y: x + y, a, b))


def sub(a: RealStream, b: RealStream) -> RealStream:
    return RealStream(lambda i: a.approx(i + 1) - b.approx(i + 1),
                      witness=_propagate(lambda x, y: x - y, a, b))


def minimum(a: RealStream, b: RealStream) -> RealStream:
    # min is 1-Lipschitz in the sup norm, so the i+1 shift is enough.
    return RealStream(lambda i: min(a.approx(i + 1), b.approx(i + 1)),
                      witness=_propagate(min, a, b))


def maximum(a: RealStream, b: RealStream) -> RealStream:
    return RealStream(lambda i: max(a.approx(i + 1), b.approx(i + 1)),
                      witness=_propagate(max, a, b))


def neg(a: RealStream) -> RealStream:
    return RealStream(lambda i: -a.approx(i),
                      witness=None if a.witness is None else -a.witness)


def absolute(a: RealStream) -> RealStream:
    return RealStream(lambda i: abs(a.approx(i)),
                      witness=None if a.witness is None else abs(a.witness))


def scale_pow2(a: RealStream, k: int) -> RealStream:
    """Scale by 2**-k.  Down-scaling (k >= 0) can reuse early input stages."""
    factor = pow2(-k)
    return RealStream(lambda i: a.approx(max(0, i - k)) * factor,
                      witness=None if a.witness is None else a.witness * factor)


def _clog2(bound: Fraction) -> int:
    """Smallest t >= 1 with 2**t >= bound."""
    t = 1
    while pow2(t) < bound:
        t += 1
    return t


def mul(a: RealStream, b: RealStream) -> RealStream:
    """Product stream.

    The stage shift is derived from stage-0 magnitudes: with
    ta = ceil(log2(|a0| + 2)) and tb likewise, stage i + ta + tb of the
    inputs keeps the product error below 2**-i.
    """
    shift_holder: list[int] = []

    def fn(i: int) -> Fraction:
        if not shift_holder:
            ta = _clog2(abs(a.approx(0)) + 2)
            tb = _clog2(abs(b.approx(0)) + 2)
            shift_holder.append(ta + tb)
        s = i + shift_holder[0]
        return a.approx(s) * b.approx(s)

    return RealStream(fn, witness=_propagate(lambda x, y: x * y, a, b))


_BINARY = {"add": add, "sub": sub, "min": minimum, "max": maximum}
_UNARY = {"neg": neg, "abs": absolute}


def lift_binary(op: str, a: RealStream, b: RealStream) -> RealStream:
    try:
        return _BINARY[op](a, b)
    except KeyError:
        raise ArgumentError("unknown binary stream operation %r" % op) from None


def lift_unary(op: str, a: RealStream, k: Optional[int] = None) -> RealStream:
    if op == "scale_pow2":
        if k is None:
            raise ArgumentError("scale_pow2 needs the exponent k")
        return scale_pow2(a, k)
    try:
        return _UNARY[op](a)
    except KeyError:
        raise ArgumentError("unknown unary stream operation %r" % op) from None


def semitest_gt(a: RealStream, q, stage: int) -> bool:
    """One-sided test that the limit of ``a`` exceeds ``q``.

    True is a certificate (approx(stage) > q + 2**-stage forces lim > q);
    False means *unknown*, never "no".
    """
    return a.approx(stage) > Fraction(q) + pow2(-stage)


def positivity_stage(v: RealStream) -> int:
    """First stage whose value certifies lim(v) > 0 via the 2**(1-i) margin.

    Only callable when the witness guarantees the scan terminates.
    """
    if v.witness is None or v.witness <= 0:
        raise ArgumentError("positivity certification needs a positive witness")
    for i in range(_SCAN_LIMIT):
        # approx(i) > 2**(1-i), i.e. the one-sided test against 2**-i.
        if semitest_gt(v, pow2(-i), i):
            return i
    raise InternalError("certification scan exhausted; stream contradicts its witness")


def rdiv(u: RealStream, v: RealStream) -> RealStream:
    """Robust division: the quotient u/v, tolerating lim(v) = 0.

    Requires witnesses with 0 <= u <= v.  When the divisor witness is 0 the
    result is the constant 0 stream (one of the admissible outputs).  When it
    is positive, stage j reads the inputs at stage j + 2*(i0+1), where i0 is
    the divisor's positivity certification stage; that shift bounds the
    quotient error by 2**-j at every stage.
    """
    if u.witness is None or v.witness is None:
        raise ArgumentError("rdiv needs witnesses on both operands")
    wu, wv = u.witness, v.witness
    if wu < 0 or wv < wu:
        raise ArgumentError("rdiv requires 0 <= u <= v on witnesses, got %s, %s"
                            % (wu, wv))
    if wv == 0:
        return const(0)

    stage_holder: list[int] = []

    def fn(j: int) -> Fraction:
        if not stage_holder:
            stage_holder.append(positivity_stage(v))
        k = j + 2 * (stage_holder[0] + 1)
        return u.approx(k) / v.approx(k)

    return RealStream(fn, witness=wu / wv)


class NatStream:
    """Total sequence of natural numbers, optionally with decidability tags.

    ``eventually_constant_from = N`` promises ``entry(k) == entry(N)`` for all
    ``k >= N``; it makes both the all-zero test and range membership
    decidable.  ``membership`` is a weaker tag: a decision procedure for
    "value in range", used by tapes whose range is infinite.
    """

    __slots__ = ("_fn", "eventually_constant_from", "_membership", "_memo")

    def __init__(self, fn: Callable[[int], int],
                 eventually_constant_from: Optional[int] = None,
                 membership: Optional[Callable[[int], bool]] = None):
        self._fn = fn
        self.eventually_constant_from = eventually_constant_from
        self._membership = membership
        self._memo: dict[int, int] = {}

    def entry(self, stage: int) -> int:
        if stage < 0:
            raise ArgumentError("stage must be a natural number, got %r" % (stage,))
        value = self._memo.get(stage)
        if value is None:
            value = int(self._fn(stage))
            if value < 0:
                raise ArgumentError("NatStream produced a negative entry")
            self._memo[stage] = value
        return value

    @classmethod
    def from_prefix(cls, prefix: Sequence[int], tail: int = 0) -> "NatStream":
        """Tape that runs through ``prefix`` and then repeats ``tail``."""
        items = tuple(int(x) for x in prefix)
        return cls(lambda i: items[i] if i < len(items) else int(tail),
                   eventually_constant_from=len(items))

    @classmethod
    def zeros(cls) -> "NatStream":
        return cls(lambda i: 0, eventually_constant_from=0)

    def all_zero(self) -> bool:
        if self.eventually_constant_from is None:
            raise ArgumentError("all-zero test needs the eventually-constant tag")
        n = self.eventually_constant_from
        return all(self.entry(s) == 0 for s in range(n + 1))

    def first_nonzero(self) -> Optional[int]:
        """Index of the first nonzero entry, or None for the all-zero tape."""
        if self.eventually_constant_from is None:
            raise ArgumentError("first-nonzero search needs the eventually-constant tag")
        for s in range(self.eventually_constant_from + 1):
            if self.entry(s) != 0:
                return s
        return None

    def membership_decidable(self) -> bool:
        return self._membership is not None or self.eventually_constant_from is not None

    def contains(self, value: int) -> bool:
        if self._membership is not None:
            return bool(self._membership(value))
        if self.eventually_constant_from is not None:
            n = self.eventually_constant_from
            return any(self.entry(s) == value for s in range(n + 1))
        raise ArgumentError("range membership is undecidable without a tag")

    def prefix(self, depth: int) -> list[int]:
        return [self.entry(s) for s in range(depth)]


# ---------------------------------------------------------------------------
# Game names: dimension header plus interleaved entry streams.
# ---------------------------------------------------------------------------

class GammaName:
    """Name of a two-matrix game: header ``0^n 1^m 0`` and a body stream.

    The body is the fixed-stride interleaving of the 2*n*m component streams:
    the two matrices alternate fastest, components run column-major, so the
    component for matrix ``s`` (0 for the row player, 1 for the column
    player), entry ``(i, j)`` contributes its stage-``t`` value at body
    position ``2*(n*m*t + c) + s`` with ``c = (j-1)*n + (i-1)``.
    """

    def __init__(self, rows: int, cols: int,
                 a: Sequence[Sequence[RealStream]],
                 b: Sequence[Sequence[RealStream]]):
        if rows < 1 or cols < 1:
            raise FormatError("game dimensions must be positive")
        a = tuple(tuple(row) for row in a)
        b = tuple(tuple(row) for row in b)
        for mat in (a, b):
            if len(mat) != rows or any(len(r) != cols for r in mat):
                raise ArgumentError("component matrix does not match the header")
        self.rows = rows
        self.cols = cols
        self.a = a
        self.b = b

    def header_prefix(self) -> list[int]:
        return [0] * self.rows + [1] * self.cols + [0]

    @staticmethod
    def parse_header(symbols: Sequence[int]) -> tuple[int, int, int]:
        """Read ``0^n 1^m 0`` from the front; returns (n, m, symbols used)."""
        pos = 0
        total = len(symbols)
        while pos < total and symbols[pos] == 0:
            pos += 1
        n = pos
        if n == 0:
            raise FormatError("game name header declares zero rows")
        start = pos
        while pos < total and symbols[pos] == 1:
            pos += 1
        m = pos - start
        if m == 0:
            raise FormatError("game name header declares zero columns")
        if pos >= total or symbols[pos] != 0:
            raise FormatError("game name header lacks the closing 0 after the 1-block")
        return n, m, pos + 1

    def component(self, which: str, i: int, j: int) -> RealStream:
        if which == "a":
            return self.a[i - 1][j - 1]
        if which == "b":
            return self.b[i - 1][j - 1]
        raise ArgumentError("component selector must be 'a' or 'b'")

    def body(self, pos: int) -> Fraction:
        if pos < 0:
            raise ArgumentError("body position must be a natural number")
        sel = pos % 2
        k = pos // 2
        per_stage = self.rows * self.cols
        stage, c = divmod(k, per_stage)
        i = c % self.rows
        j = c // self.rows
        mat = self.a if sel == 0 else self.b
        return mat[i][j].approx(stage)


def encode_gamma(game) -> GammaName:
    """Name an exact game with constant, witness-carrying component streams."""
    from .games import BiMatrixGame  # cycle guard: games imports this module

    if not isinstance(game, BiMatrixGame) or not game.is_exact():
        raise ArgumentError("encode_gamma expects an exact game")
    a = [[const(x) for x in row] for row in game.a]
    b = [[const(x) for x in row] for row in game.b]
    return GammaName(game.rows, game.cols, a, b)


def decode_gamma(name: GammaName, precision: int):
    """Stage-``precision`` rational snapshot; entries within 2**-precision."""
    from .games import BiMatrixGame

    if precision < 0:
        raise ArgumentError("precision must be a natural number")
    n, m = name.rows, name.cols
    per_stage = n * m

    def read(sel: int, i: int, j: int) -> Fraction:
        c = j * n + i
        return name.body(2 * (per_stage * precision + c) + sel)

    a = [[read(0, i, j) for j in range(m)] for i in range(n)]
    b = [[read(1, i, j) for j in range(m)] for i in range(n)]
    return BiMatrixGame(a, b)
