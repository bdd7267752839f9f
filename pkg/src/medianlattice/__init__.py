"""Randomized median-of-lattice-rules approximation of periodic functions.

Coefficients of a multivariate 1-periodic function are estimated on R
independently drawn rank-1 lattice rules and combined by a componentwise
median, which suppresses the aliasing outliers any single rule suffers.  The
package provides the plan/run/evaluate pipeline, a scikit-learn style
estimator facade, exactly-measurable benchmark functions, worst-case error
bounds, and slow oracle implementations used to cross-check the fast paths.
"""

from .aggregation import MedianAggregate, aggregate, complex_median
from .algorithm import (
    AlgorithmPlan,
    Approximant,
    GuaranteeWarning,
    alias_free_majority,
    approximant_from_json,
    approximant_to_json,
    build_plan,
    evaluate,
    run,
    search_guaranteed_plan,
)
from .approximator import MedianLatticeApproximator
from .error_analysis import (
    ErrorReport,
    RateFit,
    error_report,
    exact_l2_error,
    fit_rate,
    grid_lp_estimate,
    linf_grid_estimate,
    linf_upper_bound,
    lp_interpolated,
    tail_sum_bound,
    theorem_l2_rate_reference,
    theorem_linf_bound,
)
from .index_sets import FrequencyIndexSet, cardinality_bound, enumerate_index_set
from .korobov import (
    KorobovParams,
    WeightSequence,
    frequency_weight,
    korobov_norm_sq,
    linear_frequency_weight,
    riemann_zeta,
)
from .lattice import (
    LatticeRule,
    alias_free_set,
    draw_generator,
    draw_shift,
    dual_contains,
    lattice_points,
    merit_at_least,
    merit_value,
)
from .spectral import SpectrumEstimate, estimate_coefficients, forward_transform
from .testfunctions import ProductDecay, SparsePolynomial
from .validation import BudgetExceededError, is_prime

__version__ = "0.1.0"

__all__ = [
    "AlgorithmPlan",
    "BudgetExceededError",
    "Approximant",
    "ErrorReport",
    "FrequencyIndexSet",
    "GuaranteeWarning",
    "KorobovParams",
    "LatticeRule",
    "MedianAggregate",
    "MedianLatticeApproximator",
    "ProductDecay",
    "RateFit",
    "SparsePolynomial",
    "SpectrumEstimate",
    "WeightSequence",
    "aggregate",
    "alias_free_majority",
    "alias_free_set",
    "approximant_from_json",
    "approximant_to_json",
    "build_plan",
    "cardinality_bound",
    "complex_median",
    "draw_generator",
    "draw_shift",
    "dual_contains",
    "enumerate_index_set",
    "error_report",
    "estimate_coefficients",
    "evaluate",
    "exact_l2_error",
    "fit_rate",
    "forward_transform",
    "frequency_weight",
    "grid_lp_estimate",
    "is_prime",
    "korobov_norm_sq",
    "lattice_points",
    "linear_frequency_weight",
    "linf_grid_estimate",
    "linf_upper_bound",
    "lp_interpolated",
    "merit_at_least",
    "merit_value",
    "riemann_zeta",
    "run",
    "search_guaranteed_plan",
    "tail_sum_bound",
    "theorem_l2_rate_reference",
    "theorem_linf_bound",
]
