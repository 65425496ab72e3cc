"""Equilibrium solvers: support enumeration, correlated feasibility, the
single-player argmax, and the closed-form 2x2 table.

Each solver has an exact mode (rational arithmetic end to end) and an oracle
mode, where the input is a witness-carrying stream game, discontinuous
choices (support selection, sign covers, robust divisions) go through an
oracle, and the result is a stream object whose witnesses form an exact
equilibrium.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import ArgumentError, InternalError
from .fourier_motzkin import IneqSystem, fm_solve_exact, fm_solve_stream
from .games import (BiMatrixGame, CorrelatedMatrix, MixedProfile,
                    StreamCorrelated, StreamProfile, is_nash,
                    solve_nash_bruteforce, support_system)
from .oracles import ExactOracle
from .streams import RealStream, const


# ---------------------------------------------------------------------------
# 2x2 closed form
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Reduced2x2:
    """Incentive parameters of a 2x2 game.

    With x, y the first-strategy probabilities, the row player's payoff is
    x*(c + d*y) plus terms independent of x, and the column player's is
    y*(e + f*x) plus terms independent of y.  A profile is classified by the
    signs of (c, c+d, e, e+f): the row incentive at y=0 and y=1, and the
    column incentive at x=0 and x=1.
    """

    c: Fraction
    d: Fraction
    e: Fraction
    f: Fraction

    @classmethod
    def from_game(cls, g: BiMatrixGame) -> "Reduced2x2":
        if g.rows != 2 or g.cols != 2 or not g.is_exact():
            raise ArgumentError("reduction parameters need an exact 2x2 game")
        a, b = g.a, g.b
        return cls(c=a[0][1] - a[1][1],
                   d=a[0][0] - a[0][1] - a[1][0] + a[1][1],
                   e=b[1][0] - b[1][1],
                   f=b[0][0] - b[0][1] - b[1][0] + b[1][1])

    def signs(self) -> tuple:
        def sign(v):
            return (v > 0) - (v < 0)

        return (sign(self.c), sign(self.c + self.d),
                sign(self.e), sign(self.e + self.f))


_MIX = "mix"

# First-strategy probabilities for every sign pattern of (c, c+d, e, e+f).
# `_MIX` entries are the interior indifference point x = -e/f, y = -c/d.
_TABLE = {
    (1, 1, 1, 1): (1, 1), (1, 1, 1, -1): (1, 0),
    (1, 1, -1, 1): (1, 1), (1, 1, -1, -1): (1, 0),
    (1, -1, 1, 1): (0, 1), (1, -1, 1, -1): (0, 1),
    (1, -1, -1, 1): (_MIX, _MIX), (1, -1, -1, -1): (1, 0),
    (-1, 1, 1, 1): (1, 1), (-1, 1, 1, -1): (_MIX, _MIX),
    (-1, 1, -1, 1): (0, 0), (-1, 1, -1, -1): (0, 0),
    (-1, -1, 1, 1): (0, 1), (-1, -1, 1, -1): (0, 1),
    (-1, -1, -1, 1): (0, 0), (-1, -1, -1, -1): (0, 0),

    (0, 1, 1, 1): (1, 1), (0, 1, 1, -1): (1, 0),
    (0, 1, -1, 1): (1, 1), (0, 1, -1, -1): (1, 0),
    (0, -1, 1, 1): (0, 1), (0, -1, 1, -1): (0, 1),
    (0, -1, -1, 1): (0, 0), (0, -1, -1, -1): (1, 0),

    (1, 0, 1, 1): (1, 1), (1, 0, 1, -1): (1, 0),
    (1, 0, -1, 1): (1, 1), (1, 0, -1, -1): (1, 0),
    (-1, 0, 1, 1): (0, 1), (-1, 0, 1, -1): (0, 1),
    (-1, 0, -1, 1): (0, 0), (-1, 0, -1, -1): (0, 0),

    (1, 1, 0, 1): (1, 1), (1, 1, 0, -1): (1, 0),
    (1, -1, 0, 1): (0, 1), (1, -1, 0, -1): (1, 0),
    (-1, 1, 0, 1): (1, 1), (-1, 1, 0, -1): (0, 0),
    (-1, -1, 0, 1): (0, 1), (-1, -1, 0, -1): (0, 0),

    (1, 1, 1, 0): (1, 1), (1, 1, -1, 0): (1, 0),
    (1, -1, 1, 0): (0, 1), (1, -1, -1, 0): (1, 0),
    (-1, 1, 1, 0): (1, 1), (-1, 1, -1, 0): (0, 0),
    (-1, -1, 1, 0): (0, 1), (-1, -1, -1, 0): (0, 0),

    (0, 0, 1, 1): (1, 1), (0, 0, 1, -1): (1, 0),
    (0, 0, -1, 1): (1, 1), (0, 0, -1, -1): (1, 0),
    (0, 1, 0, 1): (1, 1), (0, 1, 0, -1): (1, 0),
    (0, -1, 0, 1): (0, 0), (0, -1, 0, -1): (0, 0),
    (0, 1, 1, 0): (1, 1), (0, 1, -1, 0): (1, 1),
    (0, -1, 1, 0): (0, 1), (0, -1, -1, 0): (0, 0),
    (-1, 0, 0, 1): (0, 1), (-1, 0, 0, -1): (0, 0),
    (1, 0, 0, 1): (1, 1), (1, 0, 0, -1): (1, 0),
    (-1, 0, 1, 0): (0, 1), (-1, 0, -1, 0): (0, 0),
    (1, 0, 1, 0): (1, 1), (1, 0, -1, 0): (1, 0),
    (1, 1, 0, 0): (1, 1), (1, -1, 0, 0): (0, 1),
    (-1, 1, 0, 0): (1, 1), (-1, -1, 0, 0): (0, 1),

    (0, 0, 0, 1): (1, 1), (0, 0, 0, -1): (1, 0),
    (0, 0, -1, 0): (1, 0), (0, 0, 1, 0): (1, 1),
    (0, 1, 0, 0): (1, 1), (0, -1, 0, 0): (0, 1),
    (-1, 0, 0, 0): (0, 1), (1, 0, 0, 0): (1, 1),

    (0, 0, 0, 0): (1, 0),
}

assert len(_TABLE) == 81


def solve_2x2_table(g: BiMatrixGame) -> MixedProfile:
    """Closed-form equilibrium of a 2x2 game via the sign-pattern table."""
    params = Reduced2x2.from_game(g)
    xv, yv = _TABLE[params.signs()]
    x1 = -params.e / params.f if xv is _MIX else Fraction(xv)
    y1 = -params.c / params.d if yv is _MIX else Fraction(yv)
    return MixedProfile((x1, 1 - x1), (y1, 1 - y1))


# ---------------------------------------------------------------------------
# Single-player games
# ---------------------------------------------------------------------------

def solve_1pure(payoffs, mode: str = "exact", oracle=None) -> int:
    """Index (1-based) of a maximal payoff; smallest index on ties.

    Exact mode takes rationals.  Oracle mode takes witness-carrying streams
    and goes through the tape comparison machine and a zero-detection oracle.
    """
    payoffs = list(payoffs)
    if not payoffs:
        raise ArgumentError("payoff vector must not be empty")
    if mode == "exact":
        if any(isinstance(p, RealStream) for p in payoffs):
            raise ArgumentError("exact mode needs rational payoffs")
        values = [Fraction(p) for p in payoffs]
        best = max(values)
        return values.index(best) + 1
    if mode == "oracle":
        from . import reductions  # runtime import: reductions builds on solvers

        streams = [p if isinstance(p, RealStream) else const(p) for p in payoffs]
        spec = reductions.one_pure_to_mlpo(len(streams))
        return reductions.run(spec, streams, oracle=oracle)
    raise ArgumentError("mode must be 'exact' or 'oracle'")


# ---------------------------------------------------------------------------
# Nash and correlated equilibria
# ---------------------------------------------------------------------------

def solve_nash(g: BiMatrixGame, mode: str = "exact", oracle=None):
    """A Nash equilibrium of the game.

    Exact mode enumerates supports (smallest first) and solves each
    feasibility system; it returns a :class:`MixedProfile`.  Oracle mode asks
    the support-cover oracle for a feasible support of the witness game and
    solves the resulting system on streams; it returns a
    :class:`StreamProfile` whose witnesses pass the exact verifier.
    """
    if mode == "exact":
        return solve_nash_bruteforce(g.witness_game() if not g.is_exact() else g)
    if mode != "oracle":
        raise ArgumentError("mode must be 'exact' or 'oracle'")
    oracle = oracle or ExactOracle()
    sgame = g.lift()
    i_set, j_set = oracle.nash_support(sgame.witness_game())
    system = support_system(sgame, i_set, j_set)
    vector = fm_solve_stream(system, oracle)
    profile = StreamProfile(vector[:g.rows], vector[g.rows:])
    if not is_nash(sgame.witness_game(), profile.witness_profile()):
        raise InternalError("oracle-mode solution failed the equilibrium check")
    return profile


def correlated_system(g: BiMatrixGame) -> IneqSystem:
    """Obedience inequalities plus total mass 1, over cell variables
    (row-major); the box bounds are implicit in the system type."""
    n, m = g.rows, g.cols
    exact = g.is_exact()
    zero = Fraction(0) if exact else const(0)
    one = Fraction(1) if exact else const(1)
    nvars = n * m
    rows, rhs = [], []

    for i in range(n):
        for l in range(n):
            if l == i:
                continue
            row = [zero] * nvars
            for j in range(m):
                row[i * m + j] = g.a[l][j] - g.a[i][j]
            rows.append(row)
            rhs.append(zero)
    for j in range(m):
        for k in range(m):
            if k == j:
                continue
            row = [zero] * nvars
            for i in range(n):
                row[i * m + j] = g.b[i][k] - g.b[i][j]
            rows.append(row)
            rhs.append(zero)
    for sign in (1, -1):
        rows.append([one if sign == 1 else -one] * nvars)
        rhs.append(one if sign == 1 else -one)
    return IneqSystem(rows, rhs)


def solve_correlated(g: BiMatrixGame, mode: str = "exact", oracle=None):
    """A correlated equilibrium: the obedience system solved by elimination,
    with the product of an exact Nash equilibrium as a fallback."""
    if mode == "exact":
        game = g.witness_game() if not g.is_exact() else g
        solution = fm_solve_exact(correlated_system(game))
        if solution is None:
            # Unreachable for correct inputs; the product construction is the
            # documented fallback.
            profile = solve_nash_bruteforce(game)
            return CorrelatedMatrix([[profile.x[i] * profile.y[j]
                                      for j in range(game.cols)]
                                     for i in range(game.rows)])
        m = game.cols
        return CorrelatedMatrix([solution[i * m:(i + 1) * m]
                                 for i in range(game.rows)])
    if mode != "oracle":
        raise ArgumentError("mode must be 'exact' or 'oracle'")
    oracle = oracle or ExactOracle()
    sgame = g.lift()
    vector = fm_solve_stream(correlated_system(sgame), oracle)
    m = g.cols
    return StreamCorrelated([vector[i * m:(i + 1) * m] for i in range(g.rows)])
