"""Shared helpers for the test suite."""

import numpy as np
import pytest

from medianlattice import KorobovParams, WeightSequence, frequency_weight
from medianlattice.index_sets import FrequencyIndexSet

SMALL_PRIMES = [5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61,
                67, 71, 73, 79, 83, 89, 97, 101]


def make_params(d=1, alpha=1.0, gamma=1.0):
    if np.isscalar(gamma):
        gamma = (float(gamma),) * d
    return KorobovParams(d, alpha, WeightSequence.explicit(gamma))


def make_index_set(params, members, threshold=0.0):
    """Build an index set with hand-picked members (lexicographically sorted)."""
    rows = sorted(tuple(int(v) for v in row) for row in members)
    H = np.array(rows, dtype=np.int64).reshape(len(rows), params.d)
    r = np.atleast_1d(np.asarray(frequency_weight(H, params), dtype=float))
    return FrequencyIndexSet(params, float(threshold), H, r)


def random_spectrum(rng, d, n_modes, h_max, real=False):
    """A random sparse spectrum dict; optionally conjugate-symmetric."""
    spectrum = {}
    while len(spectrum) < n_modes:
        h = tuple(int(v) for v in rng.integers(-h_max, h_max + 1, size=d))
        if h in spectrum:
            continue
        c = complex(rng.normal(), rng.normal())
        spectrum[h] = c
        if real:
            spectrum[tuple(-v for v in h)] = c.conjugate()
    return spectrum


def sparse_eval(spectrum, X):
    """Literal sum of c_h exp(2 pi i h.x); the oracle every fast path answers to."""
    X = np.atleast_2d(np.asarray(X, dtype=float))
    out = np.zeros(X.shape[0], dtype=complex)
    for h, c in spectrum.items():
        out += c * np.exp(2j * np.pi * (X @ np.asarray(h, dtype=float)))
    return out


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


# one-line verdicts recorded by the acceptance tests, echoed after the run
CRITERION_LINES: list[str] = []


def record_criterion(line: str) -> None:
    CRITERION_LINES.append(line)
    print(line, flush=True)


def pytest_terminal_summary(terminalreporter):
    if CRITERION_LINES:
        terminalreporter.section("acceptance criteria")
        for line in CRITERION_LINES:
            terminalreporter.write_line(line)
