"""Input validation helpers shared by the public API, the CLI and the core modules."""

import numpy as np


class BudgetExceededError(RuntimeError):
    """A routine was asked for more work than its stated budget allows."""

# Witness sets that make Miller-Rabin deterministic for every n < 3.3e24,
# which comfortably covers 64-bit inputs.
_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin primality test for 64-bit integers."""
    n = int(n)
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d = n - 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_WITNESSES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def check_odd_prime(n, name: str = "N") -> int:
    n = int(n)
    if n < 3 or n % 2 == 0 or not is_prime(n):
        raise ValueError(f"{name} must be an odd prime, got {n}")
    return n


def check_dimension(d, name: str = "d") -> int:
    d = int(d)
    if d < 1:
        raise ValueError(f"{name} must be a positive integer, got {d}")
    return d


def check_smoothness(alpha, name: str = "alpha") -> float:
    alpha = float(alpha)
    if not alpha > 0.5:
        raise ValueError(f"{name} must exceed 1/2, got {alpha}")
    return alpha


def check_odd_repetitions(R, name: str = "R") -> int:
    """Repetition counts must be odd and larger than one (a lone run has no median)."""
    R = int(R)
    if R < 3 or R % 2 == 0:
        raise ValueError(f"{name} must be an odd integer > 1, got {R}")
    return R


def check_weights(values, d: int | None = None) -> tuple[float, ...]:
    """Validate a coordinate-weight sequence: entries in (0, 1], non-increasing.

    If ``d`` is given the sequence must have exactly that length.
    """
    vals = tuple(float(v) for v in np.atleast_1d(np.asarray(values, dtype=float)))
    if d is not None and len(vals) != d:
        raise ValueError(f"expected {d} weights, got {len(vals)}")
    if not vals:
        raise ValueError("weight sequence must be non-empty")
    for j, v in enumerate(vals):
        if not (0.0 < v <= 1.0):
            raise ValueError(f"weights must lie in (0, 1]; weight {j + 1} is {v}")
    if any(a < b for a, b in zip(vals, vals[1:])):
        raise ValueError("weights must be non-increasing")
    return vals


def check_points(X, d: int) -> np.ndarray:
    """Coerce evaluation points to a (n, d) float array.

    One-dimensional input is accepted as a list of scalar points when d == 1.
    Coordinates are reduced modulo 1 (everything in sight is 1-periodic).
    """
    X = np.asarray(X, dtype=float)
    if X.ndim == 1:
        if d == 1:
            X = X[:, None]
        else:
            raise ValueError(f"expected points of dimension {d}, got a flat array")
    if X.ndim != 2 or X.shape[1] != d:
        raise ValueError(f"expected an (n, {d}) point array, got shape {X.shape}")
    if not np.all(np.isfinite(X)):
        raise ValueError("evaluation points must be finite")
    return np.mod(X, 1.0)


def check_frequencies(H, d: int) -> np.ndarray:
    """Coerce a frequency list to an (n, d) int64 array."""
    H = np.asarray(H, dtype=np.int64)
    if H.ndim == 1:
        H = H[None, :] if d > 1 else H[:, None]
    if H.ndim != 2 or H.shape[1] != d:
        raise ValueError(f"expected an (n, {d}) frequency array, got shape {H.shape}")
    return H
