"""Decide whether the mode is Bayes-optimal for a loss matrix, and build
exact counterexamples when it is not.

Two independent routes are provided: :func:`find_counterexample` solves a
margin-maximising exact LP per ordered label pair, and
:func:`brute_force_oracle` scans a rational grid on the simplex.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .cost_matrix import (
    CanonicalCostMatrix,
    CostMatrix,
    as_cost_matrix,
    canonicalize,
    is_zero_one,
)
from .decision import ProbVector, bayes_set, expected_loss, mode_set
from .errors import (
    InvariantViolation,
    MalformedSystem,
    NotSymmetric,
    ResolutionTooLarge,
    WrongArity,
)
from .lp import INFEASIBLE, solve_lp

MAX_GRID_POINTS = 10**7
DEFAULT_RESOLUTION = {2: 60, 3: 60, 4: 20, 5: 10}

Constraint = tuple[tuple[Fraction, ...], Fraction]


@dataclass(frozen=True)
class Counterexample:
    p: ProbVector
    mode_label: int
    bayes_labels: frozenset[int]
    regret: Fraction
    witness_pair: Optional[tuple[int, int]] = None


@dataclass(frozen=True)
class Verdict:
    mode_is_bayes: bool
    canonical: CanonicalCostMatrix
    counterexample: Optional[Counterexample] = None

    def __post_init__(self):
        if self.mode_is_bayes != (self.counterexample is None):
            raise InvariantViolation("verdict and counterexample disagree")
        if self.mode_is_bayes != is_zero_one(self.canonical):
            raise InvariantViolation("verdict disagrees with canonical form")


def _constraint(coeffs, const) -> Constraint:
    return tuple(Fraction(c) for c in coeffs), Fraction(const)


@dataclass(frozen=True)
class StrictFeasibilitySystem:
    """Linear system over a probability vector ``p``.

    Each constraint is ``(coeffs, const)``: equalities mean
    ``coeffs.p == const``, strict inequalities ``coeffs.p > const`` and weak
    inequalities ``coeffs.p >= const``. ``p >= 0`` is implicit and
    ``sum(p) == 1`` is always included.
    """

    k: int
    equalities: list[Constraint] = field(default_factory=list)
    strict_inequalities: list[Constraint] = field(default_factory=list)
    weak_inequalities: list[Constraint] = field(default_factory=list)

    def __post_init__(self):
        groups = {}
        for name in ("equalities", "strict_inequalities", "weak_inequalities"):
            rows = []
            for coeffs, const in getattr(self, name):
                if len(coeffs) != self.k:
                    raise MalformedSystem(
                        f"{name}: {len(coeffs)} coefficients for k={self.k}"
                    )
                rows.append(_constraint(coeffs, const))
            groups[name] = rows
        simplex = _constraint([1] * self.k, 1)
        if simplex not in groups["equalities"]:
            groups["equalities"].insert(0, simplex)
        for name, rows in groups.items():
            object.__setattr__(self, name, rows)

    def satisfied_by(self, p) -> bool:
        probs = tuple(p)
        if len(probs) != self.k or any(x < 0 for x in probs):
            return False

        def dot(c):
            return sum((a * x for a, x in zip(c, probs)), Fraction(0))

        return (
            all(dot(c) == b for c, b in self.equalities)
            and all(dot(c) > b for c, b in self.strict_inequalities)
            and all(dot(c) >= b for c, b in self.weak_inequalities)
        )


def feasible_strict(system: StrictFeasibilitySystem) -> Optional[ProbVector]:
    """Find a point meeting every constraint, strict ones strictly.

    Maximises a margin ``eps`` (capped at 1) subject to
    ``coeffs.p >= const + eps`` for each strict inequality; the system is
    strictly feasible iff the optimal margin is positive.
    """
    k = system.k
    n_strict = len(system.strict_inequalities)
    n_weak = len(system.weak_inequalities)
    eps = k
    n = k + 1 + n_strict + n_weak + 1
    A, b = [], []
    for coeffs, const in system.equalities:
        A.append(list(coeffs) + [0] * (n - k))
        b.append(const)
    slack = k + 1
    for coeffs, const in system.strict_inequalities:
        row = list(coeffs) + [0] * (n - k)
        row[eps] = -1
        row[slack] = -1
        A.append(row)
        b.append(const)
        slack += 1
    for coeffs, const in system.weak_inequalities:
        row = list(coeffs) + [0] * (n - k)
        row[slack] = -1
        A.append(row)
        b.append(const)
        slack += 1
    cap = [0] * n
    cap[eps] = 1
    cap[slack] = 1
    A.append(cap)
    b.append(1)

    objective = [0] * n
    objective[eps] = 1
    result = solve_lp(objective, A, b)
    if result.status == INFEASIBLE:
        return None
    if n_strict and result.value <= 0:
        return None
    return ProbVector(result.x[:k])


def binary_threshold(C) -> Fraction:
    """Threshold on p(1|x) at which the two decisions tie, ``c/2``."""
    m = as_cost_matrix(C)
    if m.k != 2:
        raise WrongArity(f"binary threshold needs k=2, got k={m.k}")
    if not isinstance(C, CanonicalCostMatrix):
        C = CanonicalCostMatrix(m)
    return C(1, 2) / 2


def _check_ternary_form(m: CostMatrix):
    e = m.entries
    for i in range(3):
        if e[i][i] != 0:
            raise NotSymmetric(f"diagonal entry ({i + 1},{i + 1}) is not 0")
        for j in range(3):
            if e[i][j] != e[j][i]:
                raise NotSymmetric(f"entries ({i + 1},{j + 1}) and ({j + 1},{i + 1}) differ")
            if e[i][j] < 0:
                raise NotSymmetric(f"entry ({i + 1},{j + 1}) is negative")
    if e[0][1] + e[0][2] + e[1][2] != 3:
        raise NotSymmetric("off-diagonal entries do not sum to 3 per triangle")


def ternary_conditions(C, target: int) -> StrictFeasibilitySystem:
    """Weak inequalities characterising ``target`` as a Bayes decision.

    For the symmetric matrix with ``L(1,2)=a``, ``L(1,3)=b`` and target 1:

        2b p1 >= (2a - 3) p2 + b
        2a p1 >= (2b - 3) p3 + a

    Other targets use the same pair after relabelling, with the remaining
    labels taken in ascending order.
    """
    m = as_cost_matrix(C)
    if m.k != 3:
        raise WrongArity(f"ternary conditions need k=3, got k={m.k}")
    _check_ternary_form(m)
    if target not in (1, 2, 3):
        raise ValueError(f"target label {target} outside 1..3")
    t = target - 1
    u, v = [i for i in range(3) if i != t]
    a, b = m.entries[t][u], m.entries[t][v]
    first = [Fraction(0)] * 3
    first[t], first[u] = 2 * b, -(2 * a - 3)
    second = [Fraction(0)] * 3
    second[t], second[v] = 2 * a, -(2 * b - 3)
    return StrictFeasibilitySystem(3, weak_inequalities=[(first, b), (second, a)])


def disagreement_system(C, mode_label: int, better_label: int) -> StrictFeasibilitySystem:
    """Open region where ``mode_label`` is the unique mode yet
    ``better_label`` has strictly smaller expected loss."""
    m = as_cost_matrix(C)
    k = m.k
    mi, wi = mode_label - 1, better_label - 1
    strict = []
    for j in range(k):
        if j != mi:
            coeffs = [0] * k
            coeffs[mi], coeffs[j] = 1, -1
            strict.append((coeffs, 0))
    strict.append(([x - y for x, y in zip(m.entries[mi], m.entries[wi])], 0))
    return StrictFeasibilitySystem(k, strict_inequalities=strict)


def check_counterexample(L, p) -> Optional[Counterexample]:
    """Per-point predicate: a counterexample iff the mode at ``p`` is unique
    and not Bayes-optimal under ``L``."""
    modes = mode_set(p)
    if len(modes.labels) != 1:
        return None
    (m,) = modes.labels
    bayes = bayes_set(L, p)
    if m in bayes.labels:
        return None
    return Counterexample(p, m, bayes.labels, expected_loss(L, m, p) - bayes.value)


def verify_counterexample(L, cx: Counterexample) -> bool:
    """Recheck every counterexample invariant from scratch."""
    again = check_counterexample(L, cx.p)
    return (
        again is not None
        and again.mode_label == cx.mode_label
        and again.bayes_labels == cx.bayes_labels
        and again.regret == cx.regret
        and cx.regret > 0
    )


def find_counterexample(L) -> Optional[Counterexample]:
    """First witness over ordered pairs (mode, better) in lexicographic order.

    Absent exactly when the canonical form is zero-one loss.
    """
    L = as_cost_matrix(L)
    C = canonicalize(L)
    for m in range(1, L.k + 1):
        for w in range(1, L.k + 1):
            if w == m:
                continue
            p = feasible_strict(disagreement_system(C, m, w))
            if p is None:
                continue
            cx = check_counterexample(L, p)
            if cx is None or cx.mode_label != m:
                raise InvariantViolation(f"LP witness {p.probs} for pair ({m},{w}) fails recheck")
            return Counterexample(cx.p, cx.mode_label, cx.bayes_labels, cx.regret, (m, w))
    return None


def mode_is_bayes(L) -> Verdict:
    L = as_cost_matrix(L)
    C = canonicalize(L)
    cx = find_counterexample(L)
    zero_one = is_zero_one(C)
    if zero_one and cx is not None:
        raise InvariantViolation("counterexample found for zero-one loss")
    if not zero_one and cx is None:
        raise InvariantViolation("no counterexample for a non-zero-one matrix")
    return Verdict(zero_one, C, cx)


def grid_size(k: int, resolution: int) -> int:
    return math.comb(resolution + k - 1, k - 1)


def default_resolution(k: int) -> int:
    if k in DEFAULT_RESOLUTION:
        return DEFAULT_RESOLUTION[k]
    n = 1
    while grid_size(k, n + 1) <= 10**6:
        n += 1
    return n


def _compositions(total: int, parts: int):
    """Nonnegative integer vectors summing to ``total``, lexicographic order."""
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def _integer_rows(L: CostMatrix) -> list[list[int]]:
    scale = math.lcm(*(x.denominator for row in L.entries for x in row))
    return [[int(x * scale) for x in row] for row in L.entries]


def _scan(rows: list[list[int]], resolution: int, firsts: Sequence[int]):
    k = len(rows)
    for first in firsts:
        for rest in _compositions(resolution - first, k - 1):
            n = (first,) + rest
            top = max(n)
            m = n.index(top)
            if n.count(top) != 1:
                continue
            losses = [sum(a * b for a, b in zip(row, n)) for row in rows]
            if losses[m] > min(losses):
                return n
    return None


def brute_force_oracle(L, resolution: int, workers: int = 1) -> Optional[Counterexample]:
    """Exhaustive scan of the grid ``p = n / resolution``.

    Returns the lexicographically first grid point whose unique mode is not
    Bayes-optimal. With ``workers > 1`` the first coordinate is split into
    contiguous blocks scanned in parallel; the earliest block's hit wins, so
    the result matches the sequential scan.
    """
    L = as_cost_matrix(L)
    canonicalize(L)
    if resolution < 1:
        raise ValueError("resolution must be positive")
    if grid_size(L.k, resolution) > MAX_GRID_POINTS:
        raise ResolutionTooLarge(
            f"grid for k={L.k}, N={resolution} has {grid_size(L.k, resolution)} points"
        )
    rows = _integer_rows(L)
    firsts = list(range(resolution + 1))
    if workers <= 1:
        hit = _scan(rows, resolution, firsts)
    else:
        size = math.ceil(len(firsts) / workers)
        blocks = [firsts[i:i + size] for i in range(0, len(firsts), size)]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_scan, [rows] * len(blocks), [resolution] * len(blocks), blocks))
        hit = next((r for r in results if r is not None), None)
    if hit is None:
        return None
    p = ProbVector(tuple(Fraction(x, resolution) for x in hit))
    cx = check_counterexample(L, p)
    if cx is None:
        raise InvariantViolation(f"grid point {hit} failed the exact recheck")
    return cx
