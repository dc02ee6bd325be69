"""Random generators shared by the test-suite."""

import random
from fractions import Fraction

from modegap.cost_matrix import CostMatrix, validate_reasonable
from modegap.decision import ProbVector

Q = 8


def random_reasonable_matrix(rng: random.Random, k: int, q: int = Q) -> CostMatrix:
    """Zero diagonal, off-diagonals j/q with j uniform in 0..4q, redrawn
    until reasonable."""
    while True:
        rows = [
            [Fraction(0) if i == j else Fraction(rng.randint(0, 4 * q), q) for j in range(k)]
            for i in range(k)
        ]
        m = CostMatrix.from_rows(rows)
        if validate_reasonable(m).is_reasonable:
            return m


def random_general_matrix(rng: random.Random, k: int) -> CostMatrix:
    """Arbitrary diagonal, off-diagonals at least both diagonal entries in
    their row and column, so row and column conditions both hold."""
    diag = [Fraction(rng.randint(-20, 20), rng.randint(1, 6)) for _ in range(k)]
    while True:
        rows = [
            [diag[i] if i == j else max(diag[i], diag[j]) + Fraction(rng.randint(0, 12), rng.randint(1, 4))
             for j in range(k)]
            for i in range(k)
        ]
        m = CostMatrix.from_rows(rows)
        if validate_reasonable(m).is_reasonable:
            return m


def random_prob(rng: random.Random, k: int, max_den: int = 12) -> ProbVector:
    """Grid point n/N on the simplex; small N makes ties common."""
    n_total = rng.randint(1, max_den)
    cuts = sorted(rng.randint(0, n_total) for _ in range(k - 1))
    parts = [b - a for a, b in zip([0] + cuts, cuts + [n_total])]
    rng.shuffle(parts)
    return ProbVector(tuple(Fraction(x, n_total) for x in parts))


def simplex_grid(k: int, n: int):
    def rec(total, parts):
        if parts == 1:
            yield (total,)
            return
        for first in range(total + 1):
            for rest in rec(total - first, parts - 1):
                yield (first,) + rest

    for comp in rec(n, k):
        yield ProbVector(tuple(Fraction(x, n) for x in comp))
