"""Bi-matrix games, equilibrium verifiers, and the exhaustive Nash solver.

Everything here is exact: payoffs, strategies and distribution matrices are
``fractions.Fraction`` values and every inequality is decided with zero
tolerance.  Games may also hold :class:`~equistream.streams.RealStream`
entries (the verifiers then refuse them; the solvers lift and delegate).
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from typing import Iterable, Optional, Sequence

from .errors import ArgumentError, InternalError, UnanswerableError
from .fourier_motzkin import IneqSystem, fm_solve_exact
from .streams import RealStream, const


def _matrix(entries, what: str):
    rows = tuple(tuple(x for x in row) for row in entries)
    if not rows or not rows[0]:
        raise ArgumentError("%s must have at least one row and one column" % what)
    width = len(rows[0])
    if any(len(r) != width for r in rows):
        raise ArgumentError("%s has ragged rows" % what)
    return rows


def _exact_matrix(entries, what: str):
    return tuple(tuple(Fraction(x) for x in row) for row in _matrix(entries, what))


class BiMatrixGame:
    """A pair of equally-shaped payoff matrices (row player, column player)."""

    __slots__ = ("a", "b", "rows", "cols")

    def __init__(self, a, b):
        a = _matrix(a, "payoff matrix A")
        b = _matrix(b, "payoff matrix B")
        if len(a) != len(b) or len(a[0]) != len(b[0]):
            raise ArgumentError("payoff matrices must have identical dimensions")
        if not any(isinstance(x, RealStream) for row in a + b for x in row):
            a = tuple(tuple(Fraction(x) for x in row) for row in a)
            b = tuple(tuple(Fraction(x) for x in row) for row in b)
        self.a = a
        self.b = b
        self.rows = len(a)
        self.cols = len(a[0])

    def is_exact(self) -> bool:
        return not isinstance(self.a[0][0], RealStream)

    def lift(self) -> "BiMatrixGame":
        """Exact game as a stream game with constant, witnessed entries."""
        if not self.is_exact():
            return self
        return BiMatrixGame([[const(x) for x in row] for row in self.a],
                            [[const(x) for x in row] for row in self.b])

    def witness_game(self) -> "BiMatrixGame":
        """Exact shadow of a stream game, read off the entry witnesses."""
        if self.is_exact():
            return self

        def w(x):
            if x.witness is None:
                raise UnanswerableError("stream game entry lacks a witness")
            return x.witness

        return BiMatrixGame([[w(x) for x in row] for row in self.a],
                            [[w(x) for x in row] for row in self.b])

    def __eq__(self, other):
        return (isinstance(other, BiMatrixGame)
                and self.a == other.a and self.b == other.b)

    def __hash__(self):
        return hash((self.a, self.b))

    def __repr__(self):
        return "BiMatrixGame(%dx%d)" % (self.rows, self.cols)


def _simplex(entries, what: str):
    vec = tuple(Fraction(x) for x in entries)
    if not vec:
        raise ArgumentError("%s must not be empty" % what)
    if any(x < 0 for x in vec):
        raise ArgumentError("%s has a negative weight" % what)
    if sum(vec) != 1:
        raise ArgumentError("%s weights must sum to exactly 1" % what)
    return vec


class MixedProfile:
    """A pair of exact mixed strategies (simplex vectors)."""

    __slots__ = ("x", "y")

    def __init__(self, x: Iterable, y: Iterable):
        self.x = _simplex(x, "row strategy")
        self.y = _simplex(y, "column strategy")

    def __eq__(self, other):
        return (isinstance(other, MixedProfile)
                and self.x == other.x and self.y == other.y)

    def __repr__(self):
        return "MixedProfile(x=%s, y=%s)" % (list(self.x), list(self.y))


class CorrelatedMatrix:
    """An exact joint distribution over the cells of a game."""

    __slots__ = ("c",)

    def __init__(self, c):
        c = _exact_matrix(c, "correlated matrix")
        if any(x < 0 for row in c for x in row):
            raise ArgumentError("correlated matrix has a negative entry")
        if sum(x for row in c for x in row) != 1:
            raise ArgumentError("correlated matrix entries must sum to exactly 1")
        self.c = c

    @property
    def rows(self) -> int:
        return len(self.c)

    @property
    def cols(self) -> int:
        return len(self.c[0])

    def __eq__(self, other):
        return isinstance(other, CorrelatedMatrix) and self.c == other.c

    def __repr__(self):
        return "CorrelatedMatrix(%s)" % (self.c,)


class StreamProfile:
    """Mixed strategies as approximation streams with exact witnesses."""

    __slots__ = ("x", "y")

    def __init__(self, x: Sequence[RealStream], y: Sequence[RealStream]):
        self.x = tuple(x)
        self.y = tuple(y)

    def witness_profile(self) -> MixedProfile:
        return MixedProfile([s.witness for s in self.x],
                            [s.witness for s in self.y])

    def approx(self, stage: int):
        return ([s.approx(stage) for s in self.x],
                [s.approx(stage) for s in self.y])


class StreamCorrelated:
    """A correlated matrix as approximation streams with exact witnesses."""

    __slots__ = ("c",)

    def __init__(self, c: Sequence[Sequence[RealStream]]):
        self.c = tuple(tuple(row) for row in c)

    def witness_matrix(self) -> CorrelatedMatrix:
        return CorrelatedMatrix([[s.witness for s in row] for row in self.c])

    def approx(self, stage: int):
        return [[s.approx(stage) for s in row] for row in self.c]


def _require_exact(g: BiMatrixGame):
    if not g.is_exact():
        raise ArgumentError("this operation needs an exact game; "
                            "use witness_game() on stream games")


# ---------------------------------------------------------------------------
# Verifiers (all indices 1-based)
# ---------------------------------------------------------------------------

def is_pure_equilibrium(g: BiMatrixGame, i: int, j: int) -> bool:
    """Neither player gains by a unilateral pure deviation from (i, j)."""
    _require_exact(g)
    if not (1 <= i <= g.rows and 1 <= j <= g.cols):
        raise ArgumentError("cell (%d, %d) outside a %dx%d game"
                            % (i, j, g.rows, g.cols))
    i -= 1
    j -= 1
    if any(g.a[k][j] > g.a[i][j] for k in range(g.rows)):
        return False
    if any(g.b[i][l] > g.b[i][j] for l in range(g.cols)):
        return False
    return True


def enumerate_pure(g: BiMatrixGame) -> list:
    """All pure equilibria, row-major."""
    return [(i, j)
            for i in range(1, g.rows + 1)
            for j in range(1, g.cols + 1)
            if is_pure_equilibrium(g, i, j)]


def _check_dims(g: BiMatrixGame, p: MixedProfile):
    if len(p.x) != g.rows or len(p.y) != g.cols:
        raise ArgumentError("profile dimensions %dx%d do not match game %dx%d"
                            % (len(p.x), len(p.y), g.rows, g.cols))


def first_nash_violation(g: BiMatrixGame, p: MixedProfile) -> Optional[str]:
    """The first profitable pure deviation, or None for an equilibrium."""
    _require_exact(g)
    _check_dims(g, p)
    row_value = sum(p.x[i] * g.a[i][j] * p.y[j]
                    for i in range(g.rows) for j in range(g.cols))
    for k in range(g.rows):
        gain = sum(g.a[k][j] * p.y[j] for j in range(g.cols))
        if gain > row_value:
            return "row player gains by deviating to pure strategy %d" % (k + 1)
    col_value = sum(p.x[i] * g.b[i][j] * p.y[j]
                    for i in range(g.rows) for j in range(g.cols))
    for l in range(g.cols):
        gain = sum(p.x[i] * g.b[i][l] for i in range(g.rows))
        if gain > col_value:
            return "column player gains by deviating to pure strategy %d" % (l + 1)
    return None


def is_nash(g: BiMatrixGame, p: MixedProfile) -> bool:
    """Best-response check against every pure deviation, exactly."""
    return first_nash_violation(g, p) is None


def first_correlated_violation(g: BiMatrixGame, c: CorrelatedMatrix) -> Optional[str]:
    _require_exact(g)
    if c.rows != g.rows or c.cols != g.cols:
        raise ArgumentError("matrix dimensions %dx%d do not match game %dx%d"
                            % (c.rows, c.cols, g.rows, g.cols))
    for i in range(g.rows):
        obeyed = sum(g.a[i][j] * c.c[i][j] for j in range(g.cols))
        for l in range(g.rows):
            if sum(g.a[l][j] * c.c[i][j] for j in range(g.cols)) > obeyed:
                return ("row recommendation %d is dominated by %d"
                        % (i + 1, l + 1))
    for j in range(g.cols):
        obeyed = sum(g.b[i][j] * c.c[i][j] for i in range(g.rows))
        for k in range(g.cols):
            if sum(g.b[i][k] * c.c[i][j] for i in range(g.rows)) > obeyed:
                return ("column recommendation %d is dominated by %d"
                        % (j + 1, k + 1))
    return None


def is_correlated(g: BiMatrixGame, c: CorrelatedMatrix) -> bool:
    """Both obedience inequality families, exactly."""
    return first_correlated_violation(g, c) is None


# ---------------------------------------------------------------------------
# Support enumeration
# ---------------------------------------------------------------------------

def support_pairs(n: int, m: int):
    """Support pairs ordered by total size, then lexicographically."""
    row_sets = [comb for size in range(1, n + 1)
                for comb in combinations(range(1, n + 1), size)]
    col_sets = [comb for size in range(1, m + 1)
                for comb in combinations(range(1, m + 1), size)]
    pairs = [(i_set, j_set) for i_set in row_sets for j_set in col_sets]
    pairs.sort(key=lambda p: (len(p[0]) + len(p[1]), p[0], p[1]))
    return pairs


def support_system(g: BiMatrixGame, i_set: Sequence[int],
                   j_set: Sequence[int]) -> IneqSystem:
    """Feasibility system for a Nash equilibrium with the given supports.

    Variables are x_1..x_n, y_1..y_m.  Rows encode: equal row payoffs inside
    the row support, row payoffs dominating the off-support rows (these
    constrain y), the mirror conditions on columns (constraining x), zero
    weight off-support, and the two simplex equalities per player.  The
    [0, 1] bounds are implicit in the system type.
    """
    n, m = g.rows, g.cols
    exact = g.is_exact()
    zero = Fraction(0) if exact else const(0)
    one = Fraction(1) if exact else const(1)
    i_list = sorted(i_set)
    j_list = sorted(j_set)
    if not i_list or i_list[0] < 1 or i_list[-1] > n:
        raise ArgumentError("row support out of range")
    if not j_list or j_list[0] < 1 or j_list[-1] > m:
        raise ArgumentError("column support out of range")
    nvars = n + m
    rows, rhs = [], []

    def fresh():
        return [zero] * nvars

    # Row payoffs (A y): equalities along the support, dominance off it.
    base = i_list[0] - 1
    for i in i_list[1:]:
        diff = [g.a[base][j] - g.a[i - 1][j] for j in range(m)]
        for sign in (1, -1):
            row = fresh()
            for j in range(m):
                row[n + j] = diff[j] if sign == 1 else -diff[j]
            rows.append(row)
            rhs.append(zero)
    for q in range(n):
        if q + 1 in i_list:
            continue
        row = fresh()
        for j in range(m):
            row[n + j] = g.a[q][j] - g.a[base][j]
        rows.append(row)
        rhs.append(zero)
        zr = fresh()
        zr[q] = one
        rows.append(zr)
        rhs.append(zero)

    # Column payoffs (x^T B): mirror conditions constraining x.
    cbase = j_list[0] - 1
    for j in j_list[1:]:
        diff = [g.b[i][cbase] - g.b[i][j - 1] for i in range(n)]
        for sign in (1, -1):
            row = fresh()
            for i in range(n):
                row[i] = diff[i] if sign == 1 else -diff[i]
            rows.append(row)
            rhs.append(zero)
    for l in range(m):
        if l + 1 in j_list:
            continue
        row = fresh()
        for i in range(n):
            row[i] = g.b[i][l] - g.b[i][cbase]
        rows.append(row)
        rhs.append(zero)
        zr = fresh()
        zr[n + l] = one
        rows.append(zr)
        rhs.append(zero)

    # Simplex equalities, one pair per player.
    for lo, hi in ((0, n), (n, n + m)):
        for sign in (1, -1):
            row = fresh()
            for t in range(lo, hi):
                row[t] = one if sign == 1 else -one
            rows.append(row)
            rhs.append(one if sign == 1 else -one)

    return IneqSystem(rows, rhs)


def first_feasible_support(g: BiMatrixGame):
    """Smallest feasible support pair and a solution vector for it."""
    _require_exact(g)
    for i_set, j_set in support_pairs(g.rows, g.cols):
        solution = fm_solve_exact(support_system(g, i_set, j_set))
        if solution is not None:
            return i_set, j_set, solution
    raise InternalError("no feasible support pair; equilibrium existence violated")


def solve_nash_bruteforce(g: BiMatrixGame) -> MixedProfile:
    """Ground-truth Nash solver: first feasible support pair, solved exactly."""
    _, _, solution = first_feasible_support(g)
    profile = MixedProfile(solution[:g.rows], solution[g.rows:])
    if not is_nash(g, profile):
        raise InternalError("support solution failed the equilibrium check")
    return profile
