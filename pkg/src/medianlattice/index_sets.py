"""Enumeration of weighted hyperbolic-cross frequency index sets.

The index set at threshold L collects every integer frequency vector h whose
weight r(h) is strictly below L^(2 alpha); equivalently, whose exponent-1
weight is strictly below L.  Members are enumerated by depth-first search
over coordinates with pruning: every nonzero coordinate contributes a factor
|h_j| / gamma_j^(1/(2 alpha)) >= 1, so a prefix whose weight already reaches
the threshold cannot be extended to a member.
"""

import csv
import math
from dataclasses import dataclass, field

import numpy as np

from .korobov import KorobovParams, frequency_weight
from .validation import BudgetExceededError

__all__ = ["FrequencyIndexSet", "enumerate_index_set", "cardinality_bound", "BOUNDARY_TOL"]

# Membership is decided in log space.  Weights within this tolerance of the
# threshold are treated as boundary ties and excluded (the conservative side
# of a strict inequality).
BOUNDARY_TOL = 1e-12


@dataclass(frozen=True)
class FrequencyIndexSet:
    """An enumerated frequency index set in canonical (lexicographic) order."""

    params: KorobovParams
    threshold: float
    members: np.ndarray  # (n, d) int64
    r_values: np.ndarray  # (n,) weights r(h)
    _pos: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        if not self._pos:
            self._pos.update({tuple(int(v) for v in row): i for i, row in enumerate(self.members)})

    def __len__(self) -> int:
        return int(self.members.shape[0])

    def __contains__(self, h) -> bool:
        return tuple(int(v) for v in np.atleast_1d(h)) in self._pos

    def position(self, h) -> int:
        """Row index of frequency h, or raise KeyError."""
        return self._pos[tuple(int(v) for v in np.atleast_1d(h))]

    def contains_array(self, H) -> np.ndarray:
        H = np.atleast_2d(np.asarray(H, dtype=np.int64))
        return np.array([tuple(int(v) for v in row) in self._pos for row in H], dtype=bool)

    @property
    def zero_position(self) -> int | None:
        z = (0,) * self.params.d
        return self._pos.get(z)

    def max_projection(self) -> int:
        """Largest |h_j| over all members and coordinates (0 for an empty set)."""
        if len(self) == 0:
            return 0
        return int(np.abs(self.members).max())

    def to_csv(self, path) -> None:
        """Write one row per member: columns h_1..h_d, r_value."""
        d = self.params.d
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow([f"h_{j + 1}" for j in range(d)] + ["r_value"])
            for row, r in zip(self.members, self.r_values):
                writer.writerow([int(v) for v in row] + [repr(float(r))])


def enumerate_index_set(params: KorobovParams, L: float) -> FrequencyIndexSet:
    """Enumerate the index set at threshold L in lexicographic order.

    Thresholds at or below 1 yield the empty set: the zero frequency already
    has weight exactly 1 and membership is strict.
    """
    d = params.d
    L = float(L)
    empty = FrequencyIndexSet(
        params, L, np.empty((0, d), dtype=np.int64), np.empty((0,), dtype=float)
    )
    if L <= 0.0:
        return empty
    log_thresh = math.log(L) - BOUNDARY_TOL
    if log_thresh <= 0.0:
        return empty
    # log of the per-coordinate factor for |h_j| = m is log(m) + log_gamma_cost[j]
    log_gamma_cost = -np.log(params.weights) / (2.0 * params.alpha)

    members: list[tuple[int, ...]] = []
    prefix = [0] * d

    def descend(j: int, log_weight: float) -> None:
        if j == d:
            members.append(tuple(prefix))
            return
        budget = log_thresh - log_weight - log_gamma_cost[j]
        if budget > 25.0:
            raise BudgetExceededError(
                f"index set at threshold {L} is too large to enumerate"
            )
        if budget <= 0.0:
            m_max = 0
        else:
            m_max = int(math.floor(math.exp(budget)))
            # floating guard: correct the floor by direct predicate checks
            while m_max >= 1 and math.log(m_max) >= budget:
                m_max -= 1
            while math.log(m_max + 1) < budget:
                m_max += 1
        for v in range(-m_max, m_max + 1):
            prefix[j] = v
            if v == 0:
                descend(j + 1, log_weight)
            else:
                descend(j + 1, log_weight + log_gamma_cost[j] + math.log(abs(v)))
        prefix[j] = 0

    descend(0, 0.0)
    H = np.array(members, dtype=np.int64).reshape(len(members), d)
    return FrequencyIndexSet(params, L, H, np.asarray(frequency_weight(H, params), dtype=float))


def cardinality_bound(N: int, tau: float, N2: float) -> float:
    """Upper bound 1 + (N - 1) / (1 + tau * log(N2)) on the index-set size.

    Valid for thresholds N2 > 1 (the log must be positive).
    """
    if not N2 > 1.0:
        raise ValueError(f"cardinality bound requires N2 > 1, got {N2}")
    if tau <= 0.0:
        raise ValueError(f"tau must be positive, got {tau}")
    return 1.0 + (int(N) - 1) / (1.0 + tau * math.log(N2))
