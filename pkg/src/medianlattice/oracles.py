"""Slow, literal reference implementations used as ground truth in tests.

Nothing here shares code with the fast paths: coefficients come from the
written-out double sum, alias screening from the pairwise definition, and
failure probabilities from exhaustive enumeration of generating vectors.
Budgets guard against accidentally unbounded loops.
"""

import itertools
import math
from fractions import Fraction

import numpy as np

from .index_sets import FrequencyIndexSet
from .korobov import KorobovParams, frequency_weight
from .lattice import LatticeRule, lattice_points
from .validation import BudgetExceededError

__all__ = [
    "BudgetExceededError",
    "naive_coefficients",
    "pairwise_alias_free",
    "exhaustive_alias_probability",
    "box_scan_merit",
]

EXHAUSTIVE_BUDGET = 10 ** 6
BOX_SCAN_BUDGET = 10 ** 7


def naive_coefficients(f, rule: LatticeRule, index_set: FrequencyIndexSet) -> np.ndarray:
    """The estimator formula written out literally, one frequency at a time.

    coeff(h) = (1/N) sum_k f(x_k) exp(-2 pi i h . x_k), phased against the
    node coordinates themselves and accumulated with correctly-rounded
    summation -- no residue shortcuts, so this stays an independent check
    of the transform-based path down to ~1e-13.
    """
    N = rule.N
    X = lattice_points(rule)
    values = np.asarray(f(X), dtype=complex)
    out = np.empty(len(index_set), dtype=complex)
    for i, h in enumerate(index_set.members):
        phase = X @ h.astype(float)
        terms = values * np.exp(-2j * np.pi * (phase - np.round(phase)))
        out[i] = complex(math.fsum(terms.real), math.fsum(terms.imag)) / N
    return out


def pairwise_alias_free(rule: LatticeRule, index_set: FrequencyIndexSet) -> np.ndarray:
    """Alias screening straight from the definition: h is alias-free iff no
    other member k has (h - k) in the dual lattice."""
    H = index_set.members
    n = len(index_set)
    mask = np.ones(n, dtype=bool)
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            diff = H[i] - H[j]
            if int(np.dot(diff, np.asarray(rule.z, dtype=np.int64))) % rule.N == 0:
                mask[i] = False
                break
    return mask


def exhaustive_alias_probability(
    N: int, d: int, index_set: FrequencyIndexSet, h
) -> Fraction:
    """Exact probability over all (N-1)^d generating vectors that h is NOT
    alias-free in the index set.  Returned as an exact rational."""
    if (N - 1) ** d > EXHAUSTIVE_BUDGET:
        raise BudgetExceededError(
            f"(N-1)^d = {(N - 1) ** d} exceeds the exhaustive budget {EXHAUSTIVE_BUDGET}"
        )
    h = tuple(int(v) for v in np.atleast_1d(h))
    others = [tuple(int(v) for v in row) for row in index_set.members]
    others = [k for k in others if k != h]
    bad = 0
    total = 0
    for z in itertools.product(range(1, N), repeat=d):
        total += 1
        for k in others:
            if sum(zj * (hj - kj) for zj, hj, kj in zip(z, h, k)) % N == 0:
                bad += 1
                break
    prob = Fraction(bad, total)
    # the union bound that every downstream certificate leans on
    assert prob <= Fraction(max(len(index_set) - 1, 0), N - 1)
    return prob


def box_scan_merit(rule: LatticeRule, params: KorobovParams, B: int) -> float:
    """Minimum weight r(ell) over nonzero dual points in the box [-B, B]^d,
    found by scanning every point.  +inf if the box holds no dual point."""
    if (2 * B + 1) ** params.d > BOX_SCAN_BUDGET:
        raise BudgetExceededError(
            f"(2B+1)^d = {(2 * B + 1) ** params.d} exceeds the box-scan budget {BOX_SCAN_BUDGET}"
        )
    z = np.asarray(rule.z, dtype=np.int64)
    best = math.inf
    for ell in itertools.product(range(-B, B + 1), repeat=params.d):
        if not any(ell):
            continue
        if int(np.dot(ell, z)) % rule.N == 0:
            r = float(frequency_weight(np.asarray(ell, dtype=np.int64), params))
            if r < best:
                best = r
    return best
