"""Mode and Bayes-optimal decisions for finite-category classification.

The mode of p(.|x) is the Bayes decision only under zero-one loss; this
package computes both rules exactly and produces rational counterexamples
for every other cost structure.
"""

from .certify import (
    Counterexample,
    StrictFeasibilitySystem,
    Verdict,
    binary_threshold,
    brute_force_oracle,
    feasible_strict,
    find_counterexample,
    mode_is_bayes,
    ternary_conditions,
)
from .cost_matrix import (
    CanonicalCostMatrix,
    CostMatrix,
    ReasonablenessReport,
    canonicalize,
    is_zero_one,
    principal_submatrix,
    validate_reasonable,
)
from .decision import (
    DecisionSet,
    ProbVector,
    bayes_set,
    expected_loss,
    mode_set,
    regret,
    sample_decision,
)
from .region import (
    RegionSet,
    SimplexPolygon,
    bayes_regions_ternary,
    disagreement_region,
    mode_regions_ternary,
    render_svg,
)

__version__ = "0.1.0"

__all__ = [
    "Counterexample",
    "StrictFeasibilitySystem",
    "Verdict",
    "binary_threshold",
    "brute_force_oracle",
    "feasible_strict",
    "find_counterexample",
    "mode_is_bayes",
    "ternary_conditions",
    "CanonicalCostMatrix",
    "CostMatrix",
    "ReasonablenessReport",
    "canonicalize",
    "is_zero_one",
    "principal_submatrix",
    "validate_reasonable",
    "DecisionSet",
    "ProbVector",
    "bayes_set",
    "expected_loss",
    "mode_set",
    "regret",
    "sample_decision",
    "RegionSet",
    "SimplexPolygon",
    "bayes_regions_ternary",
    "disagreement_region",
    "mode_regions_ternary",
    "render_svg",
]
