"""Shared generators and independent reference oracles for the test suite.

The feasibility reference here is deliberately a different algorithm from
the production solver: candidate vertices are enumerated as intersections of
constraint subsets and checked against every constraint, so it can certify
infeasibility of box-bounded systems exhaustively.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

from equistream.games import BiMatrixGame


def rand_rational(rng, num=8, den=4) -> Fraction:
    return Fraction(rng.randint(-num, num), rng.randint(1, den))


def rand_nonneg_rational(rng, num=8, den=4) -> Fraction:
    return Fraction(rng.randint(0, num), rng.randint(1, den))


def rand_game(rng, n, m, num=8, den=4) -> BiMatrixGame:
    return BiMatrixGame(
        [[rand_rational(rng, num, den) for _ in range(m)] for _ in range(n)],
        [[rand_rational(rng, num, den) for _ in range(m)] for _ in range(n)])


def rand_simplex(rng, n, den=6):
    """Random exact point of the n-simplex."""
    weights = [Fraction(rng.randint(0, den)) for _ in range(n)]
    if sum(weights) == 0:
        weights[rng.randrange(n)] = Fraction(1)
    total = sum(weights)
    return tuple(w / total for w in weights)


def _solve_square(constraints, nvars):
    """Unique intersection point of the chosen constraint hyperplanes."""
    a = [list(row) + [r] for row, r in constraints]
    pivots = []
    for col in range(nvars):
        pivot = None
        for t in range(len(pivots), len(a)):
            if a[t][col] != 0:
                pivot = t
                break
        if pivot is None:
            return None
        rank = len(pivots)
        a[rank], a[pivot] = a[pivot], a[rank]
        lead = a[rank]
        for t in range(len(a)):
            if t != rank and a[t][col] != 0:
                factor = a[t][col] / lead[col]
                for c in range(col, nvars + 1):
                    a[t][c] -= factor * lead[c]
        pivots.append(col)
    if len(pivots) < nvars:
        return None
    point = [Fraction(0)] * nvars
    for t, col in enumerate(pivots):
        point[col] = a[t][nvars] / a[t][col]
    return point


def box_feasible_point(rows, rhs, nvars):
    """A feasible point of Av <= b inside the unit box, or None.

    Complete for box-bounded systems: a nonempty bounded polyhedron has a
    vertex lying on nvars of the constraint hyperplanes.
    """
    constraints = [([Fraction(c) for c in row], Fraction(r))
                   for row, r in zip(rows, rhs)]
    for i in range(nvars):
        unit = [Fraction(0)] * nvars
        unit[i] = Fraction(1)
        constraints.append((unit, Fraction(1)))
        neg = [Fraction(0)] * nvars
        neg[i] = Fraction(-1)
        constraints.append((neg, Fraction(0)))
    for subset in itertools.combinations(constraints, nvars):
        point = _solve_square(subset, nvars)
        if point is None:
            continue
        if all(sum(c * v for c, v in zip(row, point)) <= r
               for row, r in constraints):
            return point
    return None


def residuals_ok(rows, rhs, point) -> bool:
    return all(sum(c * v for c, v in zip(row, point)) <= r
               for row, r in zip(rows, rhs)) and all(0 <= v <= 1 for v in point)
