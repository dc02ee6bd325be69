"""Mode and Bayes decision rules with exact, tie-aware semantics."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

from .cost_matrix import as_cost_matrix
from .errors import DimensionMismatch
from .rational import to_fraction

MASK64 = (1 << 64) - 1
GOLDEN_GAMMA = 0x9E3779B97F4A7C15


@dataclass(frozen=True)
class ProbVector:
    probs: tuple[Fraction, ...]

    def __post_init__(self):
        probs = tuple(to_fraction(x) for x in self.probs)
        if len(probs) < 2:
            raise ValueError("probability vector needs at least 2 classes")
        if any(x < 0 for x in probs):
            raise ValueError(f"negative probability in {probs}")
        if sum(probs) != 1:
            raise ValueError(f"probabilities sum to {sum(probs)}, not 1")
        object.__setattr__(self, "probs", probs)

    @classmethod
    def of(cls, *probs) -> "ProbVector":
        return cls(tuple(probs))

    @property
    def k(self) -> int:
        return len(self.probs)

    def __getitem__(self, label: int) -> Fraction:
        """p(label | x), 1-based."""
        return self.probs[label - 1]

    def __iter__(self):
        return iter(self.probs)


def as_prob_vector(p) -> ProbVector:
    return p if isinstance(p, ProbVector) else ProbVector(tuple(p))


@dataclass(frozen=True)
class DecisionSet:
    """Every optimal label (1-based) together with the optimal value."""

    labels: frozenset[int]
    value: Fraction

    def __post_init__(self):
        if not self.labels:
            raise ValueError("decision set must be nonempty")
        object.__setattr__(self, "labels", frozenset(self.labels))

    def sorted_labels(self) -> list[int]:
        return sorted(self.labels)


def _check_dims(L, p):
    if L.k != p.k:
        raise DimensionMismatch(f"matrix has k={L.k} but probability vector has k={p.k}")


def mode_set(p) -> DecisionSet:
    p = as_prob_vector(p)
    top = max(p.probs)
    return DecisionSet(frozenset(i + 1 for i, x in enumerate(p.probs) if x == top), top)


def expected_loss(L, i: int, p) -> Fraction:
    """sum_j L(i, j) p(j | x) for decision ``i`` (1-based)."""
    L, p = as_cost_matrix(L), as_prob_vector(p)
    _check_dims(L, p)
    if not 1 <= i <= L.k:
        raise DimensionMismatch(f"label {i} outside 1..{L.k}")
    return sum((c * q for c, q in zip(L.entries[i - 1], p.probs)), Fraction(0))


def expected_losses(L, p) -> list[Fraction]:
    L, p = as_cost_matrix(L), as_prob_vector(p)
    _check_dims(L, p)
    return [sum((c * q for c, q in zip(row, p.probs)), Fraction(0)) for row in L.entries]


def bayes_set(L, p) -> DecisionSet:
    losses = expected_losses(L, p)
    best = min(losses)
    return DecisionSet(frozenset(i + 1 for i, e in enumerate(losses) if e == best), best)


def regret(L, p, tie_policy: str = "uniform") -> Fraction:
    """Expected excess loss of the mode rule over the Bayes rule.

    Mode ties are broken uniformly at random (``tie_policy="uniform"``) or
    adversarially (``"worst_case"``).
    """
    losses = expected_losses(L, p)
    modes = mode_set(p).labels
    best = min(losses)
    mode_losses = [losses[i - 1] for i in modes]
    if tie_policy == "uniform":
        incurred = sum(mode_losses, Fraction(0)) / len(mode_losses)
    elif tie_policy in ("worst_case", "worst-case"):
        incurred = max(mode_losses)
    else:
        raise ValueError(f"unknown tie policy {tie_policy!r}")
    return incurred - best


def splitmix64(seed: int) -> Iterator[int]:
    """SplitMix64 stream: add the golden gamma to a 64-bit counter and mix.

    Output depends only on the seed and position, so results agree on every
    platform.
    """
    state = seed & MASK64
    while True:
        state = (state + GOLDEN_GAMMA) & MASK64
        z = state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
        yield z ^ (z >> 31)


def sample_decision(d: DecisionSet, seed: int) -> int:
    """Draw one label uniformly from ``d.labels``.

    Labels are sorted ascending and indexed by the first SplitMix64 output
    below the largest multiple of ``n`` that fits in 64 bits (rejection
    removes modulo bias), reduced mod ``n``.
    """
    labels = d.sorted_labels()
    n = len(labels)
    if n == 1:
        return labels[0]
    limit = (1 << 64) - ((1 << 64) % n)
    for x in splitmix64(seed):
        if x < limit:
            return labels[x % n]
    raise AssertionError("unreachable")


def permute_matrix(L, perm: Sequence[int]):
    """Relabel classes: new label ``perm[i-1]`` carries old label ``i``."""
    L = as_cost_matrix(L)
    k = L.k
    inv = [0] * k
    for old, new in enumerate(perm):
        inv[new - 1] = old
    return type(L)(tuple(tuple(L.entries[inv[a]][inv[b]] for b in range(k)) for a in range(k)))


def permute_probs(p, perm: Sequence[int]) -> ProbVector:
    p = as_prob_vector(p)
    out = [Fraction(0)] * p.k
    for old, new in enumerate(perm):
        out[new - 1] = p.probs[old]
    return ProbVector(tuple(out))
