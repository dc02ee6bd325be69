"""Exact rational simplex method.

Solves ``max c.x  s.t.  A x = b, x >= 0`` over :class:`Fraction` with a
dense tableau and two phases. Every row gets an artificial variable in
phase one; the leaving row is picked by the lexicographic ratio rule,
which rules out cycling on degenerate vertices.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import MalformedSystem

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"


@dataclass(frozen=True)
class LPResult:
    status: str
    x: tuple[Fraction, ...] | None = None
    value: Fraction | None = None
    pivots: int = 0


class _Unbounded(Exception):
    pass


class _Tableau:
    def __init__(self, A, b):
        self.rows = [list(r) for r in A]
        self.rhs = list(b)
        self.basis: list[int] = []
        self.pivots = 0

    def pivot(self, r: int, s: int):
        row = self.rows[r]
        piv = row[s]
        if piv != 1:
            self.rows[r] = row = [x / piv for x in row]
            self.rhs[r] /= piv
        for i, other in enumerate(self.rows):
            if i == r:
                continue
            f = other[s]
            if f:
                self.rows[i] = [x - f * y for x, y in zip(other, row)]
                self.rhs[i] -= f * self.rhs[r]
        self.basis[r] = s
        self.pivots += 1

    def reduced_costs(self, cost):
        n = len(cost)
        r = list(cost)
        for i, bcol in enumerate(self.basis):
            cb = cost[bcol]
            if cb:
                row = self.rows[i]
                for j in range(n):
                    if row[j]:
                        r[j] -= cb * row[j]
        return r

    def objective(self, cost):
        return sum((cost[b] * v for b, v in zip(self.basis, self.rhs)), Fraction(0))

    def optimize(self, cost, allowed, lex_cols):
        """Primal simplex to optimality. ``lex_cols`` must form an identity
        block in the tableau when this is called."""
        while True:
            r = self.reduced_costs(cost)
            entering = None
            for j in allowed:
                if r[j] > 0 and (entering is None or r[j] > r[entering]):
                    entering = j
            if entering is None:
                return
            s = entering
            candidates = [i for i, row in enumerate(self.rows) if row[s] > 0]
            if not candidates:
                raise _Unbounded()

            def lex_key(i):
                row = self.rows[i]
                piv = row[s]
                return [self.rhs[i] / piv] + [row[c] / piv for c in lex_cols]

            self.pivot(min(candidates, key=lex_key), s)


def solve_lp(c: Sequence, A_eq: Sequence[Sequence], b_eq: Sequence) -> LPResult:
    """Maximise ``c.x`` subject to ``A_eq x = b_eq`` and ``x >= 0`` exactly."""
    c = [Fraction(x) for x in c]
    n = len(c)
    m = len(A_eq)
    if len(b_eq) != m:
        raise MalformedSystem(f"{m} constraint rows but {len(b_eq)} right-hand sides")
    A = []
    b = []
    for row, rhs in zip(A_eq, b_eq):
        if len(row) != n:
            raise MalformedSystem(f"constraint row has {len(row)} coefficients, expected {n}")
        row = [Fraction(x) for x in row]
        rhs = Fraction(rhs)
        if rhs < 0:
            row, rhs = [-x for x in row], -rhs
        A.append(row)
        b.append(rhs)

    art = list(range(n, n + m))
    tab = _Tableau([row + [Fraction(int(i == j)) for j in range(m)] for i, row in enumerate(A)], b)
    tab.basis = list(art)

    phase1 = [Fraction(0)] * n + [Fraction(-1)] * m
    tab.optimize(phase1, range(n + m), art)
    if tab.objective(phase1) < 0:
        return LPResult(INFEASIBLE, pivots=tab.pivots)

    # drive zero-level artificials out of the basis; drop redundant rows
    i = 0
    while i < len(tab.rows):
        if tab.basis[i] >= n:
            s = next((j for j in range(n) if tab.rows[i][j] != 0), None)
            if s is None:
                del tab.rows[i], tab.rhs[i], tab.basis[i]
                continue
            tab.pivot(i, s)
        i += 1

    phase2 = c + [Fraction(0)] * m
    try:
        tab.optimize(phase2, range(n), list(tab.basis))
    except _Unbounded:
        return LPResult(UNBOUNDED, pivots=tab.pivots)

    x = [Fraction(0)] * n
    for bcol, v in zip(tab.basis, tab.rhs):
        x[bcol] = v
    return LPResult(OPTIMAL, tuple(x), tab.objective(phase2), tab.pivots)
