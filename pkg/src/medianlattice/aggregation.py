"""Median aggregation of repeated coefficient estimates.

The median of complex values is taken componentwise: median of the real
parts plus i times the median of the imaginary parts, over an odd number of
repetitions (so the median is an order statistic, not an average of two).
"""

from dataclasses import dataclass

import numpy as np

from .index_sets import FrequencyIndexSet
from .spectral import SpectrumEstimate

__all__ = ["MedianAggregate", "complex_median", "aggregate"]


@dataclass(frozen=True)
class MedianAggregate:
    """Componentwise-median coefficients over an index set from R repetitions."""

    index_set: FrequencyIndexSet
    coefficients: np.ndarray  # (|A|,) complex
    repetitions: int

    def coefficient(self, h) -> complex:
        return complex(self.coefficients[self.index_set.position(h)])


def complex_median(values: np.ndarray, axis: int = 0) -> np.ndarray | complex:
    """Componentwise median of complex values along ``axis``.

    The number of entries along the axis must be odd, and NaNs are rejected
    loudly rather than silently propagated (np.median would sort them to one
    end and bias the order statistic).
    """
    values = np.asarray(values, dtype=complex)
    R = values.shape[axis] if values.ndim else 0
    if R == 0 or R % 2 == 0:
        raise ValueError(f"complex median needs an odd number of values, got {R}")
    if not np.all(np.isfinite(values)):
        raise ValueError("complex median input contains NaN or infinity")
    med = np.median(values.real, axis=axis) + 1j * np.median(values.imag, axis=axis)
    if med.ndim == 0:
        return complex(med)
    return med


def aggregate(estimates: list[SpectrumEstimate]) -> MedianAggregate:
    """Combine per-repetition estimates into the median coefficient vector.

    All estimates must share the same index set; the repetition count must be
    odd.
    """
    if not estimates:
        raise ValueError("nothing to aggregate")
    ref = estimates[0].index_set
    for est in estimates[1:]:
        if est.index_set is not ref and not (
            est.index_set.params == ref.params
            and np.array_equal(est.index_set.members, ref.members)
        ):
            raise ValueError("estimates do not share a common index set")
    R = len(estimates)
    if R % 2 == 0:
        raise ValueError(f"repetition count must be odd, got {R}")
    stacked = np.stack([est.coefficients for est in estimates], axis=0)
    if stacked.shape[1] == 0:
        return MedianAggregate(ref, np.empty(0, dtype=complex), R)
    return MedianAggregate(ref, np.asarray(complex_median(stacked, axis=0)), R)
