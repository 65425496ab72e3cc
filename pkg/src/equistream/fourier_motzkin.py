"""Feasibility of linear inequality systems inside the unit box.

``fm_solve_exact`` decides ``Av <= b`` with the implicit bounds
``0 <= v <= 1`` over exact rationals.  A presolve pass first detects
equality pairs (a row and its negation with matching right-hand sides) and
substitutes them away, wiring the pinned variable's box bounds back in as
ordinary rows; the remaining inequalities go through variable elimination:
bound rows for the leading variable are appended, each (nonnegative,
nonpositive) leading-coefficient row pair is contracted by
cross-multiplication, and the leading variable is recovered from its bound
envelope after the recursive solve.  Parallel rows are merged to their
tightest representative at every level; flat rows are contradiction-checked
before anything else.  The cross-multiplied contraction stays valid when a
leading coefficient is zero, which is what the stream mode relies on.

``fm_solve_stream`` runs the same elimination on approximation streams.
Sign information and divisions are not continuously available there, so both
are obtained through an oracle object: ``oracle.sign_pattern`` picks the sign
cover member and evaluation order from the leading-column witnesses, and
``oracle.rdiv_batch`` answers the robust divisions used by back-substitution.
Bound expressions are clamped into [0, den] before division so every oracle
call satisfies the 0 <= num <= den domain promise; evaluating the nested
min/max envelope in order of non-increasing leading-coefficient magnitude
keeps the arbitrary values produced by zero divisors harmless.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .errors import ArgumentError, ContractError, InternalError, UnanswerableError
from .streams import RealStream, const, maximum, minimum


@dataclass(frozen=True)
class SignPattern:
    """A sign-cover member: rows with nonnegative leading coefficient, plus
    the evaluation order (row indices by non-increasing |leading|)."""

    nonneg: frozenset
    order: tuple


def canonical_sign_pattern(leading: Sequence[Fraction]) -> SignPattern:
    """Deterministic cover choice: zeros count as nonnegative, stable order."""
    values = [Fraction(x) for x in leading]
    nonneg = frozenset(i for i, x in enumerate(values) if x >= 0)
    order = tuple(sorted(range(len(values)), key=lambda i: (-abs(values[i]), i)))
    return SignPattern(nonneg=nonneg, order=order)


class IneqSystem:
    """Rows of ``A v <= b``; the box ``0 <= v <= 1`` is always implied.

    Entries are either all exact rationals or all ``RealStream`` values.
    """

    def __init__(self, rows, rhs):
        rows = [list(r) for r in rows]
        rhs = list(rhs)
        if len(rows) != len(rhs):
            raise ArgumentError("system has %d rows but %d right-hand sides"
                                % (len(rows), len(rhs)))
        if rows:
            width = len(rows[0])
            if any(len(r) != width for r in rows):
                raise ArgumentError("ragged coefficient rows")
            self._nvars = width
        else:
            self._nvars = 0
        self.rows = rows
        self.rhs = rhs

    @property
    def n_rows(self) -> int:
        return len(self.rows)

    @property
    def n_vars(self) -> int:
        return self._nvars

    def is_exact(self) -> bool:
        return not any(isinstance(x, RealStream)
                       for r in self.rows for x in r) and \
            not any(isinstance(x, RealStream) for x in self.rhs)

    def witness_system(self) -> "IneqSystem":
        """Exact shadow of a stream system, read off the witnesses."""
        def w(x):
            if isinstance(x, RealStream):
                if x.witness is None:
                    raise UnanswerableError("stream system entry lacks a witness")
                return x.witness
            return Fraction(x)

        return IneqSystem([[w(x) for x in r] for r in self.rows],
                          [w(x) for x in self.rhs])


# ---------------------------------------------------------------------------
# Exact mode
# ---------------------------------------------------------------------------

_INFEASIBLE = object()


def _normalized(rows, rhs):
    """Merge parallel rows to their tightest representative.

    Returns (rows, rhs) or _INFEASIBLE when some row reads 0 <= negative.
    """
    best = {}
    order = []
    for row, r in zip(rows, rhs):
        scale = max((abs(c) for c in row if c != 0), default=None)
        if scale is None:
            if r < 0:
                return _INFEASIBLE
            continue
        key = tuple(c / scale for c in row)
        value = r / scale
        slot = best.get(key)
        if slot is None:
            order.append(key)
            best[key] = (value, row, r)
        elif value < slot[0]:
            best[key] = (value, row, r)
    return [best[k][1] for k in order], [best[k][2] for k in order]


def _solve_reduced(rows, rhs, nvars) -> Optional[list]:
    """Eliminate the leading variable; the box rows are among ``rows``."""
    if nvars == 0:
        return [] if all(r >= 0 for r in rhs) else None

    uppers = [t for t, row in enumerate(rows) if row[0] > 0]
    lowers = [t for t, row in enumerate(rows) if row[0] < 0]
    zeros = [t for t, row in enumerate(rows) if row[0] == 0]

    new_rows, new_rhs = [], []
    for k in uppers:
        ak, bk = rows[k], rhs[k]
        for j in lowers:
            aj, bj = rows[j], rhs[j]
            new_rows.append([ak[0] * aj[i] - aj[0] * ak[i]
                             for i in range(1, nvars)])
            new_rhs.append(ak[0] * bj - aj[0] * bk)
    for z in zeros:
        new_rows.append(rows[z][1:])
        new_rhs.append(rhs[z])

    cleaned = _normalized(new_rows, new_rhs)
    if cleaned is _INFEASIBLE:
        return None
    tail = _solve_reduced(cleaned[0], cleaned[1], nvars - 1)
    if tail is None:
        return None

    def bound(t):
        row, r = rows[t], rhs[t]
        residual = r - sum(row[i] * tail[i - 1] for i in range(1, nvars))
        return residual / row[0]

    v1 = max(bound(j) for j in lowers)
    ceiling = min(bound(k) for k in uppers)
    if v1 > ceiling:
        raise InternalError("elimination produced an empty bound envelope")
    return [v1] + tail


def _find_equality(rows, rhs):
    """Index pair (i, j) of rows forming an equality, or None.

    Rows i and j form the equality when they are opposite parallel rows whose
    bounds meet: row_i v <= r_i and -s*row_i v <= r_j with r_i == -r_j/s.
    """
    seen = {}
    for t, (row, r) in enumerate(zip(rows, rhs)):
        scale = max((abs(c) for c in row if c != 0), default=None)
        if scale is None:
            continue
        key = tuple(c / scale for c in row)
        value = r / scale
        mirror = seen.get(tuple(-c for c in key))
        if mirror is not None and mirror[1] == -value:
            return mirror[0], t
        current = seen.get(key)
        if current is None or value < current[1]:
            seen[key] = (t, value)
    return None


def _substitute(rows, rhs, pivot_row, pivot_rhs, pivot):
    """Substitute pivot variable from Σ c_i v_i = b into every row."""
    cp = pivot_row[pivot]
    out_rows, out_rhs = [], []
    for row, r in zip(rows, rhs):
        factor = row[pivot] / cp
        new_row = [c - factor * pc for t, (c, pc) in enumerate(zip(row, pivot_row))
                   if t != pivot]
        out_rows.append(new_row)
        out_rhs.append(r - factor * pivot_rhs)
    return out_rows, out_rhs


def fm_solve_exact(system: IneqSystem) -> Optional[list]:
    """A box-feasible solution of the system, or None when there is none.

    Deterministic: equality rows pin their variables outright; inside a
    feasible interval the smallest admissible value of each eliminated
    variable is chosen.
    """
    if not system.is_exact():
        raise ArgumentError("fm_solve_exact needs exact rational entries")
    nvars = system.n_vars
    rows = [[Fraction(x) for x in r] for r in system.rows]
    rhs = [Fraction(x) for x in system.rhs]
    # Materialize the box so bound rows take part in presolve and elimination.
    for i in range(nvars):
        upper = [Fraction(0)] * nvars
        upper[i] = Fraction(1)
        rows.append(upper)
        rhs.append(Fraction(1))
        lower = [Fraction(0)] * nvars
        lower[i] = Fraction(-1)
        rows.append(lower)
        rhs.append(Fraction(0))
    active = list(range(nvars))
    pins = []  # (variable id, {id: coeff}, constant), latest first

    while True:
        cleaned = _normalized(rows, rhs)
        if cleaned is _INFEASIBLE:
            return None
        rows, rhs = cleaned
        pair = _find_equality(rows, rhs)
        if pair is None:
            break
        i, _ = pair
        eq_row, eq_rhs = rows[i], rhs[i]
        pivot = max(t for t, c in enumerate(eq_row) if c != 0)
        rows, rhs = _substitute(rows, rhs, eq_row, eq_rhs, pivot)
        cp = eq_row[pivot]
        expr = {active[t]: -c / cp
                for t, c in enumerate(eq_row) if t != pivot and c != 0}
        pins.append((active[pivot], expr, eq_rhs / cp))
        del active[pivot]

    tail = _solve_reduced(rows, rhs, len(active))
    if tail is None:
        return None

    values = dict(zip(active, tail))
    for var, expr, constant in reversed(pins):
        values[var] = constant + sum(c * values[t] for t, c in expr.items())
    return [values[t] for t in range(nvars)]


# ---------------------------------------------------------------------------
# Stream mode
# ---------------------------------------------------------------------------

def _witness_of(x) -> Fraction:
    if not isinstance(x, RealStream) or x.witness is None:
        raise UnanswerableError("stream elimination needs witness-carrying entries")
    return x.witness


def _cleanup_stream(rows, rhs):
    """Witness-guided version of the parallel-row merge."""
    kept = []
    seen = {}
    for row, r in zip(rows, rhs):
        wrow = [_witness_of(c) for c in row]
        wr = _witness_of(r)
        scale = max((abs(c) for c in wrow if c != 0), default=None)
        if scale is None:
            if wr < 0:
                raise ContractError("stream system is infeasible on witnesses")
            continue
        key = tuple(c / scale for c in wrow)
        value = wr / scale
        slot = seen.get(key)
        if slot is not None and kept[slot][0] <= value:
            continue
        if slot is not None:
            kept[slot] = (value, row, r)
        else:
            seen[key] = len(kept)
            kept.append((value, row, r))
    return [t[1] for t in kept], [t[2] for t in kept]


def _solve_stream(rows, rhs, nvars, oracle) -> list:
    if nvars == 0:
        return []

    zero, one = const(0), const(1)
    ext_rows = [r[:] for r in rows]
    ext_rhs = list(rhs)
    ext_rows.append([one] + [zero] * (nvars - 1))
    ext_rhs.append(one)
    ext_rows.append([-one] + [zero] * (nvars - 1))
    ext_rhs.append(zero)

    pattern = oracle.sign_pattern([_witness_of(row[0]) for row in ext_rows])
    nonneg = pattern.nonneg

    new_rows, new_rhs = [], []
    for k in sorted(nonneg):
        ak, bk = ext_rows[k], ext_rhs[k]
        for j in range(len(ext_rows)):
            if j in nonneg:
                continue
            aj, bj = ext_rows[j], ext_rhs[j]
            new_rows.append([ak[0] * aj[i] - aj[0] * ak[i]
                             for i in range(1, nvars)])
            new_rhs.append(ak[0] * bj - aj[0] * bk)

    if nvars > 1:
        new_rows, new_rhs = _cleanup_stream(new_rows, new_rhs)
        tail = _solve_stream(new_rows, new_rhs, nvars - 1, oracle)
    else:
        for r in new_rhs:
            if _witness_of(r) < 0:
                raise ContractError("stream system is infeasible on witnesses")
        tail = []

    # Back-substitution: one robust division per row, nested min/max envelope
    # evaluated with the largest leading coefficients outermost.
    pairs = []
    for t in range(len(ext_rows)):
        row, r = ext_rows[t], ext_rhs[t]
        residual = r
        for i in range(1, nvars):
            residual = residual - row[i] * tail[i - 1]
        num = residual if t in nonneg else -residual
        den = abs(row[0])
        pairs.append((maximum(zero, minimum(num, den)), den))
    quotients = oracle.rdiv_batch(pairs)

    value = None
    for t in reversed(pattern.order):
        q = quotients[t]
        if value is None:
            value = q
        elif t in nonneg:
            value = minimum(q, value)
        else:
            value = maximum(q, value)
    v1 = maximum(zero, minimum(one, value))
    return [v1] + tail


def fm_solve_stream(system: IneqSystem, oracle) -> list:
    """Solve a witness-carrying stream system; the caller promises feasibility.

    The returned streams carry exact witnesses forming a box-feasible
    solution of the witness system.
    """
    shadow = system.witness_system()
    if fm_solve_exact(shadow) is None:
        raise ContractError("stream system is infeasible on witnesses")
    rows = [[x if isinstance(x, RealStream) else const(x) for x in r]
            for r in system.rows]
    rhs = [x if isinstance(x, RealStream) else const(x) for x in system.rhs]
    return _solve_stream(rows, rhs, system.n_vars, oracle)
