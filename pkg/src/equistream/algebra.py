"""Products of games and strategies, marginals, and the 2x2 ratio gadget.

The product of an n1 x m1 game and an n2 x m2 game is the
(n1*n2) x (m1*m2) game of playing both at once, with cellwise payoff sums.
Joint indices are flattened row-major: (i1, i2) maps to (i1-1)*n2 + i2.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .errors import ArgumentError
from .games import BiMatrixGame, CorrelatedMatrix, MixedProfile
from .streams import RealStream, const


@dataclass(frozen=True)
class IndexPairing:
    """Row-major flattening of a double index with inner ranges n2, m2."""

    n2: int
    m2: int

    def row(self, i1: int, i2: int) -> int:
        return (i1 - 1) * self.n2 + i2

    def col(self, j1: int, j2: int) -> int:
        return (j1 - 1) * self.m2 + j2

    def split_row(self, i: int) -> tuple:
        return (i - 1) // self.n2 + 1, (i - 1) % self.n2 + 1

    def split_col(self, j: int) -> tuple:
        return (j - 1) // self.m2 + 1, (j - 1) % self.m2 + 1


def product_game(g1: BiMatrixGame, g2: BiMatrixGame) -> BiMatrixGame:
    """Cellwise payoff sums over the flattened joint strategy spaces."""
    pairing = IndexPairing(g2.rows, g2.cols)
    n, m = g1.rows * g2.rows, g1.cols * g2.cols
    a = [[None] * m for _ in range(n)]
    b = [[None] * m for _ in range(n)]
    for i1 in range(g1.rows):
        for i2 in range(g2.rows):
            i = pairing.row(i1 + 1, i2 + 1) - 1
            for j1 in range(g1.cols):
                for j2 in range(g2.cols):
                    j = pairing.col(j1 + 1, j2 + 1) - 1
                    a[i][j] = g1.a[i1][j1] + g2.a[i2][j2]
                    b[i][j] = g1.b[i1][j1] + g2.b[i2][j2]
    return BiMatrixGame(a, b)


def strategy_product(x1: Sequence, x2: Sequence) -> tuple:
    """Independent mix over the flattened joint index set."""
    x1 = [Fraction(v) for v in x1]
    x2 = [Fraction(v) for v in x2]
    if not x1 or not x2:
        raise ArgumentError("strategy factors must be non-empty")
    return tuple(v1 * v2 for v1 in x1 for v2 in x2)


def profile_product(p1: MixedProfile, p2: MixedProfile) -> MixedProfile:
    return MixedProfile(strategy_product(p1.x, p2.x),
                        strategy_product(p1.y, p2.y))


def marginal_first(x: Sequence, n1: int, n2: int) -> tuple:
    """First-factor marginal of a vector over flattened (n1, n2) indices."""
    x = [Fraction(v) for v in x]
    if len(x) != n1 * n2:
        raise ArgumentError("vector length %d does not factor as %d*%d"
                            % (len(x), n1, n2))
    return tuple(sum(x[i1 * n2 + i2] for i2 in range(n2)) for i1 in range(n1))


def marginal_profile_first(p: MixedProfile, dims1: tuple, dims2: tuple) -> MixedProfile:
    """First-factor marginals of a product-game profile; dims are (n, m)."""
    n1, m1 = dims1
    n2, m2 = dims2
    return MixedProfile(marginal_first(p.x, n1, n2), marginal_first(p.y, m1, m2))


def corr_marginal_first(c: CorrelatedMatrix, dims1: tuple, dims2: tuple) -> CorrelatedMatrix:
    """First-factor marginal of a correlated matrix over a product game."""
    n1, m1 = dims1
    n2, m2 = dims2
    if c.rows != n1 * n2 or c.cols != m1 * m2:
        raise ArgumentError("matrix shape %dx%d does not match the factor dims"
                            % (c.rows, c.cols))
    out = [[sum(c.c[i1 * n2 + i2][j1 * m2 + j2]
                for i2 in range(n2) for j2 in range(m2))
            for j1 in range(m1)]
           for i1 in range(n1)]
    return CorrelatedMatrix(out)


def constant_sum_value(g: BiMatrixGame) -> Optional[Fraction]:
    """The common cell sum A_ij + B_ij, or None when it is not constant."""
    if not g.is_exact():
        raise ArgumentError("constant-sum detection needs an exact game")
    value = g.a[0][0] + g.b[0][0]
    for i in range(g.rows):
        for j in range(g.cols):
            if g.a[i][j] + g.b[i][j] != value:
                return None
    return value


def mp_gadget(a, b) -> BiMatrixGame:
    """Diagonal 2x2 zero-sum game; for a, b > 0 its unique equilibrium puts
    weight b/(a+b) on the first strategy of both players."""
    if isinstance(a, RealStream) or isinstance(b, RealStream):
        a = a if isinstance(a, RealStream) else const(a)
        b = b if isinstance(b, RealStream) else const(b)
        zero = const(0)
        mat_a = [[a, zero], [zero, b]]
        mat_b = [[-a, zero], [zero, -b]]
    else:
        a, b = Fraction(a), Fraction(b)
        zero = Fraction(0)
        mat_a = [[a, zero], [zero, b]]
        mat_b = [[-a, zero], [zero, -b]]
    return BiMatrixGame(mat_a, mat_b)
