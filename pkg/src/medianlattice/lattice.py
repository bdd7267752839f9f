"""Rank-1 lattice rules, their dual lattices and alias-free frequency sets."""

import math
from dataclasses import dataclass

import numpy as np

from .index_sets import FrequencyIndexSet, enumerate_index_set
from .korobov import KorobovParams, frequency_weight
from .validation import check_odd_prime

__all__ = [
    "LatticeRule",
    "lattice_points",
    "dual_contains",
    "alias_free_set",
    "merit_at_least",
    "merit_value",
    "draw_generator",
    "draw_shift",
]


@dataclass(frozen=True)
class LatticeRule:
    """An N-point rank-1 lattice rule with generating vector z and optional shift.

    N must be an odd prime; each component of z lies in {1, ..., N-1} and each
    shift coordinate in [0, 1).
    """

    N: int
    z: tuple[int, ...]
    shift: tuple[float, ...] | None = None

    def __post_init__(self):
        N = check_odd_prime(self.N)
        z = tuple(int(v) for v in np.atleast_1d(self.z))
        if not z:
            raise ValueError("generating vector must be non-empty")
        for v in z:
            if not (1 <= v <= N - 1):
                raise ValueError(f"generator components must lie in 1..{N - 1}, got {v}")
        object.__setattr__(self, "N", N)
        object.__setattr__(self, "z", z)
        if self.shift is not None:
            s = tuple(float(v) for v in np.atleast_1d(self.shift))
            if len(s) != len(z):
                raise ValueError("shift must have the same dimension as z")
            if any(not (0.0 <= v < 1.0) for v in s):
                raise ValueError("shift coordinates must lie in [0, 1)")
            object.__setattr__(self, "shift", s)

    @property
    def d(self) -> int:
        return len(self.z)


def lattice_points(rule: LatticeRule) -> np.ndarray:
    """All N node coordinates frac(k * z / N + shift) as an (N, d) array.

    The unshifted coordinates are computed as ((k * z_j) mod N) / N, which is
    exact in double precision; a shift is folded back into [0, 1) afterwards,
    with any 1.0 produced by rounding clamped to 0.0.
    """
    k = np.arange(rule.N, dtype=np.int64)[:, None]
    z = np.asarray(rule.z, dtype=np.int64)[None, :]
    X = (k * z % rule.N) / float(rule.N)
    if rule.shift is not None:
        X = X + np.asarray(rule.shift, dtype=float)[None, :]
        X -= np.floor(X)
        X[X >= 1.0] = 0.0
    return X


def dual_contains(rule: LatticeRule, ell) -> bool:
    """Whether z . ell == 0 (mod N), i.e. ell lies in the dual lattice.

    Python integers make overflow a non-issue, but each term is reduced mod N
    anyway so the intermediate sums stay small.
    """
    ell = np.atleast_1d(np.asarray(ell, dtype=object))
    if ell.shape[0] != rule.d:
        raise ValueError(f"frequency vector must have length {rule.d}")
    acc = 0
    for zj, lj in zip(rule.z, ell):
        acc = (acc + zj * (int(lj) % rule.N)) % rule.N
    return acc == 0


def _residues(rule: LatticeRule, H: np.ndarray) -> np.ndarray:
    """t(h) = h . z mod N for each row of H."""
    z = np.asarray(rule.z, dtype=np.int64)
    return (H @ z) % rule.N


def alias_free_set(rule: LatticeRule, index_set: FrequencyIndexSet) -> np.ndarray:
    """Boolean mask over the index set: h is alias-free iff no other member of
    the set lies in h + dual.

    Two members h != k share a coset of the dual exactly when their residues
    h . z mod N agree, so one residue-bucketing pass decides every membership
    at once.
    """
    n = len(index_set)
    if n >= rule.N:
        raise ValueError(
            f"alias-free screening requires |A| < N, got |A| = {n}, N = {rule.N}"
        )
    if n == 0:
        return np.zeros(0, dtype=bool)
    t = _residues(rule, index_set.members)
    counts = np.bincount(t, minlength=rule.N)
    return counts[t] == 1


def merit_at_least(rule: LatticeRule, params: KorobovParams, L: float) -> bool:
    """Whether the figure of merit min r(ell) over nonzero dual ell is >= L^(2 alpha).

    Equivalent to: no nonzero member of the index set at threshold L lies in
    the dual lattice.
    """
    A = enumerate_index_set(params, L)
    for row in A.members:
        if not np.any(row):
            continue
        if dual_contains(rule, row):
            return False
    return True


def merit_value(rule: LatticeRule, params: KorobovParams, cap: float = 2.0 ** 16) -> float | None:
    """The figure of merit itself, or None if it exceeds cap^(2 alpha).

    Searches expanding thresholds L = 2, 4, 8, ...  The first threshold whose
    index set contains a nonzero dual member gives the exact minimum: every
    dual point outside that set has weight >= L^(2 alpha), above any candidate
    found inside.
    """
    L = 2.0
    while L <= cap:
        A = enumerate_index_set(params, L)
        best = None
        for row, r in zip(A.members, A.r_values):
            if not np.any(row):
                continue
            if dual_contains(rule, row):
                if best is None or r < best:
                    best = float(r)
        if best is not None:
            return best
        L *= 2.0
    return None


def draw_generator(rng: np.random.Generator, N: int, d: int) -> tuple[int, ...]:
    """Draw a generating vector with iid components uniform on {1, ..., N-1}."""
    return tuple(int(v) for v in rng.integers(1, N, size=d))


def draw_shift(rng: np.random.Generator, d: int) -> tuple[float, ...]:
    """Draw a uniform random shift in [0, 1)^d."""
    return tuple(float(v) for v in rng.random(d))
