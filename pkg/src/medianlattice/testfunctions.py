"""Benchmark functions with exactly known Fourier coefficients.

Two families are provided:

* ``SparsePolynomial`` -- a finite spectrum given explicitly; everything
  (values, norms, tails) is a finite sum.
* ``ProductDecay`` -- coefficients c * prod_{j in supp(h)} gamma_j^theta / |h_j|^s
  with s > alpha + 1/2, so the function lies in the class with a genuinely
  infinite spectrum.  Norms and coefficient tails have closed forms through
  the zeta function, and pointwise values reduce to the one-dimensional
  cosine series C_s(x) = sum_{m >= 1} cos(2 pi m x) / m^s per coordinate.

On rational grids (lattice nodes, uniform tensor grids) C_s is evaluated
exactly by folding the coefficient tail into Hurwitz zeta values; at general
points even integer s has a Bernoulli-polynomial closed form and other s fall
back to mpmath's generalized Clausen function.
"""

import math
from functools import lru_cache

import mpmath
import numpy as np
from scipy.special import zeta as _hurwitz_zeta

from .index_sets import FrequencyIndexSet
from .korobov import KorobovParams, frequency_weight, riemann_zeta
from .lattice import LatticeRule
from .spectral import fourier_on_tensor_grid
from .validation import check_frequencies, check_points

__all__ = ["SparsePolynomial", "ProductDecay", "cosine_series", "cosine_series_table"]


def cosine_series(s: float, x) -> np.ndarray:
    """C_s(x) = sum_{m>=1} cos(2 pi m x) / m^s at arbitrary points, s > 1.

    Even integer s up to 6 uses the exact Bernoulli-polynomial identity;
    anything else is delegated pointwise to mpmath (accurate but slow -- the
    table/fold paths below avoid this on rational grids).
    """
    x = np.mod(np.asarray(x, dtype=float), 1.0)
    if s == 2.0:
        return np.pi ** 2 * (x * x - x + 1.0 / 6.0)
    if s == 4.0:
        return -(np.pi ** 4) / 3.0 * (x ** 4 - 2.0 * x ** 3 + x * x - 1.0 / 30.0)
    if s == 6.0:
        b6 = x ** 6 - 3.0 * x ** 5 + 2.5 * x ** 4 - 0.5 * x * x + 1.0 / 42.0
        return 2.0 * np.pi ** 6 / 45.0 * b6
    flat = x.ravel()
    out = np.array([float(mpmath.clcos(s, 2.0 * math.pi * v)) for v in flat])
    return out.reshape(x.shape)


@lru_cache(maxsize=256)
def cosine_series_table(s: float, G: int) -> np.ndarray:
    """C_s at the uniform grid points t/G, t = 0..G-1, computed exactly.

    Folding m mod G turns the series into a length-G transform whose
    coefficients are Hurwitz zeta values: the residue-t mass is
    G^(-s) zeta(s, t/G) for t >= 1 and G^(-s) zeta(s) for t = 0.
    """
    G = int(G)
    b = np.empty(G, dtype=float)
    b[0] = riemann_zeta(s)
    if G > 1:
        b[1:] = _hurwitz_zeta(s, np.arange(1, G) / G)
    b *= float(G) ** (-s)
    return np.real(np.fft.ifft(b)) * G


def _coordinate_values(s: float, N: int, shift_j: float | None) -> np.ndarray:
    """C_s at the N node coordinates frac(t/N + shift_j), indexed by t."""
    if shift_j is None:
        return cosine_series_table(s, N)
    q, nu = divmod(shift_j * N, 1.0)
    base = cosine_series(s, (np.arange(N) + nu) / N)
    # node with residue t sits at grid slot (t + q) mod N
    return base[(np.arange(N) + int(q)) % N]


class SparsePolynomial:
    """A trigonometric polynomial with an explicitly listed spectrum.

    Parameters
    ----------
    params : KorobovParams
    spectrum : dict
        Maps frequency tuples (length d) to complex coefficients.
    normalize : bool
        Scale the coefficients so the class norm is exactly 1.
    """

    def __init__(self, params: KorobovParams, spectrum: dict, normalize: bool = False):
        self.params = params
        items = [(tuple(int(v) for v in np.atleast_1d(h)), complex(c)) for h, c in spectrum.items()]
        for h, _ in items:
            if len(h) != params.d:
                raise ValueError(f"frequency {h} does not have dimension {params.d}")
        self._H = np.array([h for h, _ in items], dtype=np.int64).reshape(len(items), params.d)
        self._c = np.array([c for _, c in items], dtype=complex)
        if normalize:
            nrm = math.sqrt(self.norm_sq())
            if nrm == 0.0:
                raise ValueError("cannot normalize the zero polynomial")
            self._c = self._c / nrm

    @property
    def d(self) -> int:
        return self.params.d

    @property
    def spectrum(self) -> dict:
        return {tuple(int(v) for v in h): complex(c) for h, c in zip(self._H, self._c)}

    def norm_sq(self) -> float:
        return float(np.sum(np.abs(self._c) ** 2 * frequency_weight(self._H, self.params)))

    def is_real(self) -> bool:
        """Whether the spectrum is conjugate-symmetric (real-valued function)."""
        spec = self.spectrum
        return all(
            tuple(-v for v in h) in spec
            and abs(np.conj(spec[tuple(-v for v in h)]) - c) <= 1e-14 * max(1.0, abs(c))
            for h, c in spec.items()
        )

    def fourier_coefficients(self, H) -> np.ndarray:
        H = check_frequencies(H, self.d)
        spec = self.spectrum
        return np.array([spec.get(tuple(int(v) for v in row), 0.0) for row in H], dtype=complex)

    def __call__(self, X) -> np.ndarray:
        X = check_points(X, self.d)
        return np.exp(2j * np.pi * (X @ self._H.T)) @ self._c

    # exact tail sums over the complement of an index set
    def tail_sq(self, index_set: FrequencyIndexSet) -> float:
        outside = ~index_set.contains_array(self._H) if len(self._c) else np.zeros(0, bool)
        return float(np.sum(np.abs(self._c[outside]) ** 2))

    def tail_abs(self, index_set: FrequencyIndexSet) -> float:
        outside = ~index_set.contains_array(self._H) if len(self._c) else np.zeros(0, bool)
        return float(np.sum(np.abs(self._c[outside])))

    def eval_uniform_grid(self, G: int) -> np.ndarray:
        """Exact values on the tensor grid (t_1/G, ..., t_d/G)."""
        return fourier_on_tensor_grid(self._H, self._c, self.d, G)


class ProductDecay:
    """Coefficients c * prod_{j in supp(h)} gamma_j^theta / |h_j|^s.

    ``s`` must exceed alpha + 1/2 so the function lies in the class; with
    ``normalize=True`` (default) c is chosen so the class norm is exactly 1.
    The function is real-valued and factorizes over coordinates:
    f(x) = c * prod_j (1 + 2 gamma_j^theta C_s(x_j)).
    """

    def __init__(self, params: KorobovParams, s: float, theta: float = 0.5,
                 normalize: bool = True):
        if not s > params.alpha + 0.5:
            raise ValueError(
                f"decay exponent s must exceed alpha + 1/2 = {params.alpha + 0.5}, got {s}"
            )
        self.params = params
        self.s = float(s)
        self.theta = float(theta)
        g = params.weights
        # norm^2 = c^2 * prod (1 + 2 gamma^(2 theta - 1) zeta(2 (s - alpha)))
        self._norm_factor = float(
            np.prod(1.0 + 2.0 * g ** (2.0 * self.theta - 1.0) * riemann_zeta(2.0 * (self.s - params.alpha)))
        )
        self.c = 1.0 / math.sqrt(self._norm_factor) if normalize else 1.0

    @property
    def d(self) -> int:
        return self.params.d

    def norm_sq(self) -> float:
        return self.c ** 2 * self._norm_factor

    def is_real(self) -> bool:
        return True

    def fourier_coefficients(self, H) -> np.ndarray:
        H = check_frequencies(H, self.d)
        g = self.params.weights
        absH = np.abs(H).astype(float)
        factors = np.where(H != 0, g ** self.theta / np.where(H != 0, absH, 1.0) ** self.s, 1.0)
        return (self.c * factors.prod(axis=1)).astype(complex)

    def __call__(self, X) -> np.ndarray:
        X = check_points(X, self.d)
        g = self.params.weights
        out = np.full(X.shape[0], self.c, dtype=float)
        for j in range(self.d):
            out *= 1.0 + 2.0 * g[j] ** self.theta * cosine_series(self.s, X[:, j])
        return out

    def sample_lattice(self, rule: LatticeRule) -> np.ndarray:
        """Values at all N lattice nodes, via per-coordinate residue tables."""
        if rule.d != self.d:
            raise ValueError("lattice rule dimension mismatch")
        N = rule.N
        g = self.params.weights
        k = np.arange(N, dtype=np.int64)
        out = np.full(N, self.c, dtype=float)
        for j in range(self.d):
            t = (k * rule.z[j]) % N
            shift_j = rule.shift[j] if rule.shift is not None else None
            table = 1.0 + 2.0 * g[j] ** self.theta * _coordinate_values(self.s, N, shift_j)
            out *= table[t]
        return out

    def eval_uniform_grid(self, G: int) -> np.ndarray:
        """Exact values on the tensor grid (t_1/G, ..., t_d/G)."""
        g = self.params.weights
        tables = [
            1.0 + 2.0 * g[j] ** self.theta * cosine_series_table(self.s, G)
            for j in range(self.d)
        ]
        out = np.array(self.c, dtype=float)
        for tab in tables:
            out = np.multiply.outer(out, tab)
        return out

    # exact coefficient-tail sums over the complement of an index set
    def _total_sq(self) -> float:
        g = self.params.weights
        return self.c ** 2 * float(
            np.prod(1.0 + 2.0 * g ** (2.0 * self.theta) * riemann_zeta(2.0 * self.s))
        )

    def _total_abs(self) -> float:
        g = self.params.weights
        return abs(self.c) * float(
            np.prod(1.0 + 2.0 * g ** self.theta * riemann_zeta(self.s))
        )

    def _first_excluded(self, index_set: FrequencyIndexSet) -> int:
        # d = 1 index sets are symmetric contiguous ranges {-m..m}
        m = index_set.max_projection()
        assert len(index_set) in (0, 2 * m + 1), "one-dimensional index set is not contiguous"
        return m + 1

    def tail_sq(self, index_set: FrequencyIndexSet) -> float:
        if self.d == 1:
            t0 = self._first_excluded(index_set)
            g1 = float(self.params.weights[0])
            tail = 2.0 * self.c ** 2 * g1 ** (2.0 * self.theta) * float(_hurwitz_zeta(2.0 * self.s, t0))
            if len(index_set) == 0:
                tail += self.c ** 2
            return tail
        inset = float(np.sum(np.abs(self.fourier_coefficients(index_set.members)) ** 2)) \
            if len(index_set) else 0.0
        return max(self._total_sq() - inset, 0.0)

    def tail_abs(self, index_set: FrequencyIndexSet) -> float:
        if self.d == 1:
            t0 = self._first_excluded(index_set)
            g1 = float(self.params.weights[0])
            tail = 2.0 * abs(self.c) * g1 ** self.theta * float(_hurwitz_zeta(self.s, t0))
            if len(index_set) == 0:
                tail += abs(self.c)
            return tail
        inset = float(np.sum(np.abs(self.fourier_coefficients(index_set.members)))) \
            if len(index_set) else 0.0
        return max(self._total_abs() - inset, 0.0)
