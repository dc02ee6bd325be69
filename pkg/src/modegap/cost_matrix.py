"""Loss matrices, reasonableness checks and the canonical normal form.

Rows index the decision and columns the realized class, so
``entries[i][j]`` is the cost of deciding ``i + 1`` when ``j + 1`` occurs.
Labels are 1-based at every public boundary.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .errors import BadIndices, NotReasonable
from .rational import to_fraction

Row = tuple[Fraction, ...]


@dataclass(frozen=True)
class CostMatrix:
    entries: tuple[Row, ...]

    def __post_init__(self):
        rows = tuple(tuple(to_fraction(x) for x in row) for row in self.entries)
        k = len(rows)
        if k < 2:
            raise ValueError(f"cost matrix needs at least 2 classes, got {k}")
        for i, row in enumerate(rows):
            if len(row) != k:
                raise ValueError(f"row {i + 1} has {len(row)} entries, expected {k}")
        object.__setattr__(self, "entries", rows)

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence]) -> "CostMatrix":
        return cls(tuple(tuple(r) for r in rows))

    @classmethod
    def zero_one(cls, k: int) -> "CostMatrix":
        return cls(tuple(tuple(Fraction(int(i != j)) for j in range(k)) for i in range(k)))

    @property
    def k(self) -> int:
        return len(self.entries)

    def __call__(self, i: int, j: int) -> Fraction:
        """L(i, j) with 1-based labels."""
        return self.entries[i - 1][j - 1]

    def to_lists(self) -> list[list[Fraction]]:
        return [list(r) for r in self.entries]


@dataclass(frozen=True)
class CanonicalCostMatrix:
    """A cost matrix with zero diagonal and nonnegative off-diagonal
    entries averaging to one."""

    inner: CostMatrix

    def __post_init__(self):
        e, k = self.inner.entries, self.inner.k
        total = Fraction(0)
        for i in range(k):
            if e[i][i] != 0:
                raise NotReasonable(f"diagonal entry ({i + 1},{i + 1}) is {e[i][i]}, not 0")
            for j in range(k):
                if i != j:
                    if e[i][j] < 0:
                        raise NotReasonable(f"entry ({i + 1},{j + 1}) is negative")
                    total += e[i][j]
        if total != k * (k - 1):
            raise NotReasonable(f"off-diagonal sum is {total}, expected {k * (k - 1)}")

    @property
    def k(self) -> int:
        return self.inner.k

    @property
    def entries(self) -> tuple[Row, ...]:
        return self.inner.entries

    def __call__(self, i: int, j: int) -> Fraction:
        return self.inner(i, j)


def as_cost_matrix(m) -> CostMatrix:
    """Accept either matrix flavour, or a plain nested sequence."""
    if isinstance(m, CanonicalCostMatrix):
        return m.inner
    if isinstance(m, CostMatrix):
        return m
    return CostMatrix.from_rows(m)


@dataclass(frozen=True)
class ReasonablenessReport:
    is_reasonable: bool
    violations: list[tuple[int, int]] = field(default_factory=list)
    has_strict: bool = False


def validate_reasonable(L) -> ReasonablenessReport:
    """Check ``L(i,j) >= L(i,i)`` everywhere with at least one strict case.

    Violations are reported as 1-based ``(i, j)`` pairs. The strictness
    requirement is global: one strictly larger off-diagonal entry anywhere
    suffices, and all-zero rows are allowed.
    """
    e = as_cost_matrix(L).entries
    k = len(e)
    violations = []
    has_strict = False
    for i in range(k):
        for j in range(k):
            if i == j:
                continue
            if e[i][j] < e[i][i]:
                violations.append((i + 1, j + 1))
            elif e[i][j] > e[i][i]:
                has_strict = True
    return ReasonablenessReport(not violations and has_strict, violations, has_strict)


def canonicalize(L) -> CanonicalCostMatrix:
    """Reduce ``L`` to canonical form by columnwise shifts and positive scaling.

    Column ``j`` is shifted by ``-L(j,j)`` and the result scaled so the
    off-diagonal entries sum to ``k(k-1)``. Neither step changes which
    decisions minimise expected loss.
    """
    L = as_cost_matrix(L)
    report = validate_reasonable(L)
    if not report.is_reasonable:
        raise NotReasonable(
            f"matrix is not reasonable (violations={report.violations}, "
            f"has_strict={report.has_strict})"
        )
    e, k = L.entries, L.k
    shifted = [[e[i][j] - e[j][j] for j in range(k)] for i in range(k)]
    bad = [(i + 1, j + 1) for i in range(k) for j in range(k) if shifted[i][j] < 0]
    if bad:
        # row-wise reasonable but a column shift still goes negative
        raise NotReasonable(f"column-shifted entries are negative at {bad}")
    total = sum(shifted[i][j] for i in range(k) for j in range(k) if i != j)
    if total == 0:
        raise NotReasonable("off-diagonal entries vanish after column shift")
    scale = Fraction(k * (k - 1)) / total
    return CanonicalCostMatrix(CostMatrix(tuple(tuple(scale * x for x in row) for row in shifted)))


def is_zero_one(C: CanonicalCostMatrix) -> bool:
    e = C.entries
    return all(e[i][j] == 1 for i in range(len(e)) for j in range(len(e)) if i != j)


def principal_submatrix(C, indices: Sequence[int]) -> CostMatrix:
    """Restrict rows and columns to ``indices`` (1-based), in the given order.

    The result is generally not canonical.
    """
    m = as_cost_matrix(C)
    idx = list(indices)
    if len(idx) < 2:
        raise BadIndices("need at least two labels")
    if len(set(idx)) != len(idx):
        raise BadIndices(f"duplicate labels in {idx}")
    for t in idx:
        if not isinstance(t, int) or isinstance(t, bool) or not 1 <= t <= m.k:
            raise BadIndices(f"label {t!r} outside 1..{m.k}")
    return CostMatrix(tuple(tuple(m.entries[i - 1][j - 1] for j in idx) for i in idx))


def ternary_matrix(a, b) -> CostMatrix:
    """Symmetric canonical 3x3 matrix with off-diagonals ``a``, ``b``, ``3-a-b``."""
    a, b = to_fraction(a), to_fraction(b)
    c = 3 - a - b
    return CostMatrix(((0, a, b), (a, 0, c), (b, c, 0)))


def binary_matrix(c) -> CostMatrix:
    """Canonical 2x2 matrix ``[[0, c], [2-c, 0]]``."""
    c = to_fraction(c)
    return CostMatrix(((0, c), (2 - c, 0)))
