"""The randomized median algorithm: plan construction, execution, evaluation.

A plan fixes the lattice size N, the oversampling control tau and the odd
repetition count R, and derives from them the effective threshold N2, the
frequency index set and the failure-probability certificates.  Running a plan
draws R independent generating vectors (and optionally shifts), estimates all
coefficients per repetition, and aggregates them by the componentwise median.
"""

import json
import math
import warnings
from dataclasses import dataclass

import numpy as np

from .aggregation import aggregate
from .index_sets import FrequencyIndexSet, enumerate_index_set
from .korobov import KorobovParams, WeightSequence
from .lattice import LatticeRule, alias_free_set, draw_generator, draw_shift
from .spectral import estimate_coefficients
from .validation import check_odd_prime, check_odd_repetitions, check_points

__all__ = [
    "GuaranteeWarning",
    "AlgorithmPlan",
    "Approximant",
    "build_plan",
    "run",
    "evaluate",
    "alias_free_majority",
    "search_guaranteed_plan",
    "plan_to_dict",
    "approximant_to_json",
    "approximant_from_json",
]

# Logarithm used inside the plan formulas (oversampling factor, N2 and the
# failure probabilities).  The natural log is adopted as the reading of "log"
# in those expressions; swap this out to experiment with other conventions.
LOG = math.log


class GuaranteeWarning(UserWarning):
    """A plan was built whose error guarantee is vacuous (N2 <= 1 or eps2 > 1)."""


@dataclass(frozen=True)
class AlgorithmPlan:
    """Everything derived from (params, tau, R, N) before any randomness."""

    params: KorobovParams
    tau: float
    R: int
    N: int
    oversampling: float  # the product P_{N,d}
    N2: float
    index_set: FrequencyIndexSet
    eps1: float  # failure bound for the alias-free-majority event
    eps2: float  # failure bound including the joint zero-frequency condition
    guaranteed: bool

    @property
    def total_evaluations(self) -> int:
        return self.R * self.N

    @property
    def half_count(self) -> int:
        """ceil(R / 2), the majority threshold."""
        return (self.R + 1) // 2


@dataclass(frozen=True)
class Approximant:
    """A trigonometric polynomial produced by one run of the algorithm."""

    plan: AlgorithmPlan
    coefficients: np.ndarray  # (|A|,) complex median coefficients
    rules: tuple[LatticeRule, ...]
    seed: int
    shifted: bool

    def __call__(self, X) -> np.ndarray:
        return evaluate(self, X)


def build_plan(
    params: KorobovParams, tau: float, R: int, N: int, warn: bool = True
) -> AlgorithmPlan:
    """Derive the plan quantities for given class parameters and (tau, R, N).

    N must be an odd prime and R odd and > 1.  If the derived threshold N2 is
    at most 1 the index set is empty and the run degenerates to the zero
    approximant; that and a failure bound eps2 > 1 are reported through a
    GuaranteeWarning rather than an error.
    """
    tau = float(tau)
    if tau <= 0:
        raise ValueError(f"tau must be positive, got {tau}")
    R = check_odd_repetitions(R)
    N = check_odd_prime(N)
    g_root = params.root_weights
    oversampling = float(np.prod(1.0 + 2.0 * g_root * (1.0 + tau * LOG(N))))
    N2 = (N - 1) / (math.exp(1.0 / tau) * oversampling)
    index_set = enumerate_index_set(params, N2)
    size = len(index_set)
    if N2 > 1.0:
        base = 1.0 + tau * LOG(N2)
        half = (R + 1) // 2
        eps1 = size / 2.0 * (4.0 / base) ** half
        eps2 = size / 2.0 * (8.0 / base) ** half
    else:
        eps1 = math.inf
        eps2 = math.inf
    if size < N and index_set.max_projection() > (N - 1) // 2:
        # cannot happen for a set smaller than N; guards the residue screen
        raise AssertionError("index set projection exceeds (N-1)/2")
    guaranteed = N2 > 1.0 and eps2 <= 1.0
    if warn and not guaranteed:
        reason = "N2 <= 1 leaves an empty index set" if N2 <= 1.0 else f"eps2 = {eps2:.3g} > 1"
        warnings.warn(
            f"plan (N={N}, tau={tau}, R={R}) carries no failure guarantee: {reason}",
            GuaranteeWarning,
            stacklevel=2,
        )
    return AlgorithmPlan(
        params, tau, R, N, oversampling, N2, index_set, eps1, eps2, guaranteed
    )


def _rule_streams(seed: int, R: int):
    """Independent per-repetition RNG streams for generators and shifts.

    The generator streams are split separately from the shift streams so that
    a shifted and an unshifted run from the same seed draw identical z_r.
    """
    gen = [
        np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(0, r))))
        for r in range(R)
    ]
    shf = [
        np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(1, r))))
        for r in range(R)
    ]
    return gen, shf


def draw_rules(plan: AlgorithmPlan, seed: int, shifted: bool) -> tuple[LatticeRule, ...]:
    """The R lattice rules a run with this seed will use, without running it."""
    d = plan.params.d
    gen_streams, shift_streams = _rule_streams(int(seed), plan.R)
    rules = []
    for r in range(plan.R):
        z = draw_generator(gen_streams[r], plan.N, d)
        shift = draw_shift(shift_streams[r], d) if shifted else None
        rules.append(LatticeRule(plan.N, z, shift))
    return tuple(rules)


def run(f, plan: AlgorithmPlan, seed: int, shifted: bool = False) -> Approximant:
    """Execute the plan on a sampleable function.

    ``f`` is called once per repetition with the full (N, d) node array (or
    through its ``sample_lattice`` hook).  Repetitions are evaluated serially,
    so ``f`` need not be safe for concurrent calls.  The same seed always
    reproduces the same draws, and a shifted run shares its generating
    vectors with the unshifted run of the same seed.
    """
    rules = draw_rules(plan, seed, shifted)
    if len(plan.index_set) == 0:
        coeffs = np.empty(0, dtype=complex)
        return Approximant(plan, coeffs, rules, int(seed), shifted)
    estimates = [estimate_coefficients(f, rule, plan.index_set) for rule in rules]
    agg = aggregate(estimates)
    return Approximant(plan, agg.coefficients, rules, int(seed), shifted)


def evaluate(approx: Approximant, X) -> np.ndarray:
    """Evaluate the approximant sum_h c_h exp(2 pi i h . x) at points X.

    Returns complex values; take the real part when approximating a
    real-valued function.
    """
    X = check_points(X, approx.plan.params.d)
    if len(approx.plan.index_set) == 0:
        return np.zeros(X.shape[0], dtype=complex)
    H = approx.plan.index_set.members
    return np.exp(2j * np.pi * (X @ H.T)) @ approx.coefficients


def alias_free_majority(plan: AlgorithmPlan, rules) -> bool:
    """Diagnostic for the aggregation success event.

    True iff every frequency in the plan's index set is alias-free in at
    least ceil(R/2) repetitions that also have the zero frequency alias-free.
    Under this event the median coefficients of any function supported inside
    the index set are recovered exactly.
    """
    A = plan.index_set
    n = len(A)
    if n == 0:
        return True
    zero_pos = A.zero_position
    counts = np.zeros(n, dtype=np.int64)
    for rule in rules:
        mask = alias_free_set(rule, A)
        if zero_pos is not None and not mask[zero_pos]:
            continue
        counts += mask
    return bool(np.all(counts >= plan.half_count))


def search_guaranteed_plan(
    params: KorobovParams,
    target_eps2: float,
    tau_grid,
    R_grid,
    N_grid,
) -> AlgorithmPlan | None:
    """First plan over the given grids with eps2 <= target_eps2.

    Scans N (ascending), then tau, then R, so the cheapest qualifying plan
    wins.  Returns None when the grids contain no qualifying plan.
    """
    for N in sorted(int(n) for n in N_grid):
        for tau in tau_grid:
            for R in sorted(int(r) for r in R_grid):
                plan = build_plan(params, tau, R, N, warn=False)
                if plan.N2 > 1.0 and plan.eps2 <= target_eps2:
                    return plan
    return None


# ---------------------------------------------------------------------------
# serialization

def _finite_or_none(x: float) -> float | None:
    # strict JSON has no Infinity/NaN literals; emit null for unbounded values
    return float(x) if math.isfinite(x) else None


def plan_to_dict(plan: AlgorithmPlan) -> dict:
    return {
        "d": plan.params.d,
        "alpha": plan.params.alpha,
        "gamma": list(plan.params.gamma.values),
        "gamma_kind": plan.params.gamma.kind,
        "tau": plan.tau,
        "R": plan.R,
        "N": plan.N,
        "oversampling": plan.oversampling,
        "N2": plan.N2,
        "index_set_size": len(plan.index_set),
        "eps1": _finite_or_none(plan.eps1),
        "eps2": _finite_or_none(plan.eps2),
        "guaranteed": plan.guaranteed,
        "total_evaluations": plan.total_evaluations,
    }


def approximant_to_json(approx: Approximant) -> str:
    """Serialize a run result: plan echo, index set, coefficients, provenance."""
    doc = {
        "plan": plan_to_dict(approx.plan),
        "index_set": [[int(v) for v in row] for row in approx.plan.index_set.members],
        "coefficients": [[float(c.real), float(c.imag)] for c in approx.coefficients],
        "provenance": {
            "seed": approx.seed,
            "shifted": approx.shifted,
            "repetitions": [
                {
                    "z": list(rule.z),
                    "shift": list(rule.shift) if rule.shift is not None else None,
                }
                for rule in approx.rules
            ],
        },
    }
    return json.dumps(doc, indent=2)


def approximant_from_json(text: str) -> Approximant:
    """Rebuild an approximant (plan, coefficients, rules) from its JSON form."""
    doc = json.loads(text)
    p = doc["plan"]
    params = KorobovParams(
        p["d"], p["alpha"], WeightSequence(p.get("gamma_kind", "explicit"), tuple(p["gamma"]))
    )
    plan = build_plan(params, p["tau"], p["R"], p["N"], warn=False)
    stored = np.array(doc["index_set"], dtype=np.int64).reshape(-1, params.d)
    if not np.array_equal(stored, plan.index_set.members):
        raise ValueError("stored index set does not match the rebuilt plan")
    coeffs = np.array([complex(re, im) for re, im in doc["coefficients"]], dtype=complex)
    prov = doc["provenance"]
    rules = tuple(
        LatticeRule(p["N"], tuple(rep["z"]), tuple(rep["shift"]) if rep["shift"] else None)
        for rep in prov["repetitions"]
    )
    return Approximant(plan, coeffs, rules, int(prov["seed"]), bool(prov["shifted"]))
