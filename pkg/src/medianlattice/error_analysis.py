"""Error measurement against known spectra, worst-case bounds, rate fitting.

The L2 error of an approximant against a function with known coefficients
splits exactly (Parseval) into the in-set coefficient errors plus the
coefficient tail outside the index set.  The L-infinity error is bracketed by
the coefficient-sum upper bound and a dense-grid lower estimate, and Lp norms
for 2 < p < infinity interpolate: ||g||_p <= ||g||_2^(2/p) ||g||_inf^(1-2/p).
"""

import math
import time
from dataclasses import dataclass, field

import numpy as np

from .algorithm import AlgorithmPlan, Approximant, run
from .korobov import KorobovParams, riemann_zeta
from .lattice import LatticeRule
from .spectral import fourier_on_rank1, fourier_on_tensor_grid
from .validation import is_prime

__all__ = [
    "ErrorReport",
    "exact_l2_error",
    "linf_upper_bound",
    "linf_grid_estimate",
    "grid_lp_estimate",
    "lp_interpolated",
    "tail_sum_bound",
    "theorem_linf_bound",
    "theorem_l2_rate_reference",
    "RateFit",
    "fit_rate",
    "error_report",
    "csv_header",
    "csv_row",
]

DEFAULT_GRID_1D = 4096
DEFAULT_GRID_2D = 512


def exact_l2_error(approx: Approximant, f) -> float:
    """sqrt( sum_{h in A} |c_h - fhat(h)|^2  +  tail energy outside A )."""
    A = approx.plan.index_set
    inset = 0.0
    if len(A):
        diff = approx.coefficients - f.fourier_coefficients(A.members)
        inset = float(np.sum(np.abs(diff) ** 2))
    return math.sqrt(inset + f.tail_sq(A))


def linf_upper_bound(approx: Approximant, f) -> float:
    """Coefficient-sum bound: sum_{h in A} |c_h - fhat(h)| + tail outside A."""
    A = approx.plan.index_set
    inset = 0.0
    if len(A):
        diff = approx.coefficients - f.fourier_coefficients(A.members)
        inset = float(np.sum(np.abs(diff)))
    # plain float even if f's tail computation hands back a numpy scalar
    return float(inset + f.tail_abs(A))


def _tensor_grid_points(d: int, G: int) -> np.ndarray:
    axes = [np.arange(G) / G] * d
    mesh = np.meshgrid(*axes, indexing="ij")
    return np.stack([m.ravel() for m in mesh], axis=-1)


def _function_grid_values(f, d: int, G: int) -> np.ndarray:
    if hasattr(f, "eval_uniform_grid"):
        return np.asarray(f.eval_uniform_grid(G))
    return np.asarray(f(_tensor_grid_points(d, G))).reshape((G,) * d)


def _next_odd_prime(n: int) -> int:
    n = max(int(n), 3) | 1
    while not is_prime(n):
        n += 2
    return n


def _evaluation_rule(approx: Approximant) -> LatticeRule:
    """Deterministic dense rank-1 rule used for d >= 3 sup-norm estimates."""
    plan = approx.plan
    M = _next_odd_prime(max(2 * len(plan.index_set) + 1, 257))
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(0x9D1CE)))
    z = tuple(int(v) for v in rng.integers(1, M, size=plan.params.d))
    return LatticeRule(M, z)


def _error_grid_values(approx: Approximant, f, grid_size: int | None):
    """Pointwise error values on the measurement grid (flattened)."""
    d = approx.plan.params.d
    A = approx.plan.index_set
    if d <= 2:
        G = grid_size or (DEFAULT_GRID_1D if d == 1 else DEFAULT_GRID_2D)
        approx_vals = fourier_on_tensor_grid(A.members, approx.coefficients, d, G)
        f_vals = _function_grid_values(f, d, G)
        return (approx_vals - f_vals).ravel()
    rule = _evaluation_rule(approx)
    approx_vals = fourier_on_rank1(A.members, approx.coefficients, rule)
    if hasattr(f, "sample_lattice"):
        f_vals = np.asarray(f.sample_lattice(rule))
    else:
        from .lattice import lattice_points

        f_vals = np.asarray(f(lattice_points(rule)))
    return approx_vals - f_vals


def linf_grid_estimate(approx: Approximant, f, grid_size: int | None = None) -> float:
    """max |A(f) - f| over a dense grid: a tensor grid for d <= 2 (4096 points
    for d = 1, 512^2 for d = 2), a dense rank-1 evaluation lattice for d >= 3.

    A lower estimate of the true sup norm; compare against linf_upper_bound.
    """
    return float(np.max(np.abs(_error_grid_values(approx, f, grid_size))))


def grid_lp_estimate(approx: Approximant, f, p: float, grid_size: int | None = None) -> float:
    """(mean |A(f) - f|^p)^(1/p) over the same measurement grid."""
    if p <= 0:
        raise ValueError(f"p must be positive, got {p}")
    vals = np.abs(_error_grid_values(approx, f, grid_size))
    return float(np.mean(vals ** p) ** (1.0 / p))


def lp_interpolated(l2: float, linf: float, p: float) -> float:
    """||g||_p <= ||g||_2^(2/p) * ||g||_inf^(1-2/p) for 2 < p < infinity."""
    if not p > 2.0 or math.isinf(p):
        raise ValueError(f"interpolation applies to 2 < p < infinity, got {p}")
    if l2 < 0 or linf < 0:
        raise ValueError("norms must be non-negative")
    return l2 ** (2.0 / p) * linf ** (1.0 - 2.0 / p)


def tail_sum_bound(M: float, q: float, params: KorobovParams) -> float:
    """Closed-form bound on sum_{h outside A(M)} 1 / r(h).

    Valid for 1/(2 alpha) < q < 1 and M >= 1:
        (gamma_1^(1/2) M^(2 alpha))^(-(1/q - 1)/(2 alpha))
        * q/(1-q) * prod_j (1 + 2 gamma_j^q zeta(2 alpha q))^(1/q).
    """
    alpha = params.alpha
    if not (1.0 / (2.0 * alpha) < q < 1.0):
        raise ValueError(f"q must lie in (1/(2 alpha), 1) = ({1/(2*alpha):.4g}, 1), got {q}")
    if M < 1.0:
        raise ValueError(f"threshold M must be >= 1, got {M}")
    g = params.weights
    z = riemann_zeta(2.0 * alpha * q)
    prod = float(np.prod((1.0 + 2.0 * g ** q * z) ** (1.0 / q)))
    lead = (math.sqrt(g[0]) * M ** (2.0 * alpha)) ** (-(1.0 / q - 1.0) / (2.0 * alpha))
    return lead * q / (1.0 - q) * prod


_Q_GRID_SIZE = 64


def theorem_linf_bound(plan: AlgorithmPlan, q: float | None = None) -> tuple[float, float]:
    """High-probability sup-norm bound for unit-norm functions.

    (2R + 1) * sqrt(tail_sum_bound(N2, q)); holds with probability >= 1 - eps1.
    With q=None the bound is minimized over a 64-point q grid.  Returns
    (bound, q used).
    """
    if not plan.N2 > 1.0:
        raise ValueError("the sup-norm bound needs N2 > 1")
    factor = 2.0 * plan.R + 1.0
    if q is not None:
        return factor * math.sqrt(tail_sum_bound(plan.N2, q, plan.params)), q
    lo = 1.0 / (2.0 * plan.params.alpha) + 1e-3
    hi = 1.0 - 1e-3
    if not lo < hi:
        raise ValueError("alpha is too close to 1/2 to place the q grid")
    best = (math.inf, math.nan)
    for q_try in np.linspace(lo, hi, _Q_GRID_SIZE):
        val = factor * math.sqrt(tail_sum_bound(plan.N2, float(q_try), plan.params))
        if val < best[0]:
            best = (val, float(q_try))
    return best


def theorem_l2_rate_reference(plan: AlgorithmPlan) -> float:
    """Reference L2 rate shape (1 + log2 N2)^((d-1)/2) / N2^alpha.

    The constant in front is not specified; use this only to compare decay
    shapes across N.
    """
    if not plan.N2 > 1.0:
        raise ValueError("the rate reference needs N2 > 1")
    d = plan.params.d
    return (1.0 + math.log2(plan.N2)) ** ((d - 1) / 2.0) / plan.N2 ** plan.params.alpha


@dataclass(frozen=True)
class RateFit:
    slope: float
    intercept: float
    r_squared: float


def fit_rate(sizes, errors) -> RateFit:
    """Least-squares slope of log(error) against log(N).

    Needs at least 4 points with distinct sizes and positive errors.
    """
    sizes = np.asarray(sizes, dtype=float)
    errors = np.asarray(errors, dtype=float)
    if sizes.shape != errors.shape or sizes.ndim != 1:
        raise ValueError("sizes and errors must be matching 1-d sequences")
    if sizes.size < 4:
        raise ValueError(f"rate fitting needs at least 4 points, got {sizes.size}")
    if np.unique(sizes).size < 2:
        raise ValueError("rate fitting needs at least two distinct sizes")
    if np.any(errors <= 0) or np.any(sizes <= 0):
        raise ValueError("sizes and errors must be positive for a log-log fit")
    x = np.log(sizes)
    y = np.log(errors)
    slope, intercept = np.polyfit(x, y, 1)
    resid = y - (slope * x + intercept)
    total = y - y.mean()
    denom = float(total @ total)
    r2 = 1.0 - float(resid @ resid) / denom if denom > 0 else 1.0
    return RateFit(float(slope), float(intercept), r2)


@dataclass(frozen=True)
class ErrorReport:
    """One run's errors plus the full plan echo; maps 1:1 onto a CSV row."""

    plan: AlgorithmPlan
    seed: int
    shifted: bool
    l2: float
    linf_upper: float
    linf_grid: float
    lp: dict = field(default_factory=dict)
    evaluations: int = 0
    wallclock_ms: float = 0.0


def error_report(
    f,
    plan: AlgorithmPlan,
    seed: int,
    shifted: bool = False,
    p_list: tuple[float, ...] = (),
    grid_size: int | None = None,
) -> ErrorReport:
    """Run the plan on f and measure every error the lab knows about.

    Wallclock covers the algorithm run itself (sampling + transforms +
    aggregation), not the error measurement.
    """
    t0 = time.perf_counter()
    approx = run(f, plan, seed, shifted)
    wallclock_ms = (time.perf_counter() - t0) * 1e3
    l2 = exact_l2_error(approx, f)
    upper = linf_upper_bound(approx, f)
    grid = linf_grid_estimate(approx, f, grid_size)
    lp = {float(p): grid_lp_estimate(approx, f, float(p), grid_size) for p in p_list}
    return ErrorReport(
        plan, int(seed), shifted, l2, upper, grid, lp, plan.total_evaluations, wallclock_ms
    )


def csv_header(p_list: tuple[float, ...] = ()) -> list[str]:
    cols = ["d", "alpha", "gamma", "N", "N2", "A_size", "R", "tau", "seed", "shifted",
            "l2", "linf_upper", "linf_grid"]
    cols += [f"lp_{p:g}" for p in p_list]
    cols += ["eps1", "eps2", "evals", "wallclock_ms"]
    return cols


def csv_row(report: ErrorReport, p_list: tuple[float, ...] = ()) -> list:
    plan = report.plan
    row = [
        plan.params.d,
        plan.params.alpha,
        ";".join(repr(g) for g in plan.params.gamma.values),
        plan.N,
        repr(plan.N2),
        len(plan.index_set),
        plan.R,
        plan.tau,
        report.seed,
        int(report.shifted),
        repr(report.l2),
        repr(report.linf_upper),
        repr(report.linf_grid),
    ]
    row += [repr(report.lp[float(p)]) for p in p_list]
    row += [repr(plan.eps1), repr(plan.eps2), report.evaluations, repr(report.wallclock_ms)]
    return row
