"""Coefficient estimation on rank-1 lattices via a single length-N transform.

The estimator for every frequency h in an index set only depends on the
residue t(h) = h . z mod N, so one length-N discrete Fourier transform of the
node samples yields all coefficient estimates at once.  N is an odd prime, so
radix FFTs do not apply directly; for N > 64 the transform is evaluated with
Bluestein's chirp trick (a power-of-two padded convolution), below that a
direct O(N^2) summation is cheaper.
"""

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .index_sets import FrequencyIndexSet
from .lattice import LatticeRule, lattice_points, _residues

__all__ = [
    "SpectrumEstimate",
    "forward_transform",
    "estimate_coefficients",
    "fourier_on_tensor_grid",
    "fourier_on_rank1",
]

_DIRECT_LIMIT = 64


@dataclass(frozen=True)
class SpectrumEstimate:
    """Estimated coefficients over an index set from a single lattice rule."""

    index_set: FrequencyIndexSet
    coefficients: np.ndarray  # (|A|,) complex
    rule: LatticeRule
    n_evaluations: int

    def coefficient(self, h) -> complex:
        return complex(self.coefficients[self.index_set.position(h)])


@lru_cache(maxsize=64)
def _bluestein_kernel(N: int):
    # chirp w_k = exp(-i pi k^2 / N); k^2 is reduced mod 2N first so the
    # phase argument stays small and sin/cos stay fully accurate
    k = np.arange(N, dtype=np.int64)
    sq = (k * k) % (2 * N)
    w = np.exp(-1j * np.pi * sq / N)
    M = 1
    while M < 2 * N - 1:
        M *= 2
    b = np.zeros(M, dtype=complex)
    b[:N] = np.conj(w)
    b[M - N + 1:] = np.conj(w[1:])[::-1]
    return w, np.fft.fft(b), M


def forward_transform(samples: np.ndarray) -> np.ndarray:
    """G(t) = (1/N) sum_k samples[k] exp(-2 pi i k t / N) for t = 0..N-1."""
    samples = np.asarray(samples, dtype=complex)
    N = samples.shape[0]
    if N <= _DIRECT_LIMIT:
        k = np.arange(N)
        E = np.exp(-2j * np.pi * np.outer(k, k) / N)
        return E @ samples / N
    w, fb, M = _bluestein_kernel(N)
    fa = np.fft.fft(samples * w, M)
    conv = np.fft.ifft(fa * fb)
    return w * conv[:N] / N


def fourier_on_tensor_grid(H: np.ndarray, coeffs: np.ndarray, d: int, G: int) -> np.ndarray:
    """Exact values of sum_h c_h exp(2 pi i h . x) on the tensor grid (t/G)_j.

    On grid points only h mod G matters, so the spectrum is folded into a
    (G,)^d coefficient array and inverted with an FFT; this is exact for any
    spectrum, not just band-limited ones.
    """
    C = np.zeros((G,) * d, dtype=complex)
    if len(coeffs):
        np.add.at(C, tuple((np.asarray(H, dtype=np.int64) % G).T), np.asarray(coeffs, dtype=complex))
    return np.fft.ifftn(C) * G ** d


def fourier_on_rank1(H: np.ndarray, coeffs: np.ndarray, rule: LatticeRule) -> np.ndarray:
    """Exact values of sum_h c_h exp(2 pi i h . x_k) at unshifted rank-1 nodes.

    Node k only sees the residue h . z mod N, so the spectrum folds into a
    length-N vector followed by one inverse FFT.
    """
    b = np.zeros(rule.N, dtype=complex)
    if len(coeffs):
        t = (np.asarray(H, dtype=np.int64) @ np.asarray(rule.z, dtype=np.int64)) % rule.N
        np.add.at(b, t, np.asarray(coeffs, dtype=complex))
    return np.fft.ifft(b) * rule.N


def estimate_coefficients(
    f, rule: LatticeRule, index_set: FrequencyIndexSet
) -> SpectrumEstimate:
    """Estimate the Fourier coefficients of f over an index set from one rule.

    The per-frequency estimator averages f over the (possibly shifted) nodes
    against exp(-2 pi i h . x_k); for shifted rules this equals the unshifted
    residue lookup times the phase exp(-2 pi i h . shift).

    ``f`` is called once with the full (N, d) node array and must return N
    values.  Objects exposing ``sample_lattice(rule)`` are sampled through
    that hook instead (function kinds with special structure use it to sample
    all nodes at once without a per-point series evaluation).
    """
    if index_set.params.d != rule.d:
        raise ValueError("index set dimension does not match the lattice rule")
    if hasattr(f, "sample_lattice"):
        values = np.asarray(f.sample_lattice(rule), dtype=complex)
    else:
        values = np.asarray(f(lattice_points(rule)), dtype=complex)
    if values.shape != (rule.N,):
        raise ValueError(f"expected {rule.N} node samples, got shape {values.shape}")
    G = forward_transform(values)
    t = _residues(rule, index_set.members)
    coeffs = G[t]
    if rule.shift is not None:
        phase = index_set.members @ np.asarray(rule.shift, dtype=float)
        coeffs = coeffs * np.exp(-2j * np.pi * phase)
    return SpectrumEstimate(index_set, coeffs, rule, rule.N)
