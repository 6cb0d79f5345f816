"""Circular statistics for event phases."""

from __future__ import annotations

import numpy as np

from .exceptions import DataError

UNDEFINED_MEAN_TOL = 1e-12


def wrap(angles):
    """Wrap radians into ``[-pi, pi)``."""
    return np.mod(np.asarray(angles, dtype=float) + np.pi, 2 * np.pi) - np.pi


def _resultant(phases):
    phi = np.asarray(phases, dtype=float).reshape(-1)
    if phi.size == 0:
        raise DataError("no phases")
    return np.sum(np.exp(1j * phi)), phi.size


def resultant_length(phases) -> float:
    """Mean resultant length ``|sum exp(i*phi)| / n`` in ``[0, 1]``."""
    s, n = _resultant(phases)
    return float(min(abs(s) / n, 1.0))


def circular_mean(phases) -> float:
    """Direction of the resultant vector, in ``[-pi, pi]``."""
    s, n = _resultant(phases)
    if abs(s) / n <= UNDEFINED_MEAN_TOL:
        raise DataError("undefined circular mean")
    return float(np.angle(s))


def rayleigh_test(n: int, resultant_length: float) -> float:
    """Rayleigh test p-value for ``n`` angles with mean resultant length ``R``.

    Uses the small-sample corrected series (Zar; Fisher 1995)::

        Z = n R^2
        p = exp(-Z) [1 + (2Z - Z^2) / 4n - (24Z - 132Z^2 + 76Z^3 - 9Z^4) / 288n^2]

    clamped to ``(0, 1]``.
    """
    if n < 3:
        raise DataError("insufficient events")
    r = float(resultant_length)
    if not 0 <= r <= 1 + 1e-12:
        raise ValueError("resultant length must lie in [0, 1]")
    z = n * r * r
    p = np.exp(-z) * (
        1 + (2 * z - z ** 2) / (4 * n) - (24 * z - 132 * z ** 2 + 76 * z ** 3 - 9 * z ** 4) / (288 * n ** 2)
    )
    return float(min(max(p, np.finfo(float).tiny), 1.0))


def rayleigh_test_montecarlo(n: int, resultant_length: float, draws: int = 1_000_000, seed: int = 0,
                             chunk: int = 50_000) -> float:
    """Monte Carlo Rayleigh p-value under uniform phases.

    Counts how many of ``draws`` uniform samples of size ``n`` reach the
    observed resultant length; returns ``(count + 1) / (draws + 1)``. Chunks
    draw from independent Philox streams spawned off one seed, so the result
    does not depend on how the work is split.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if draws < 10_000:
        raise ValueError("draws must be >= 1e4")
    n_chunks = -(-draws // chunk)
    streams = np.random.SeedSequence(seed).spawn(n_chunks)
    hits = 0
    remaining = draws
    for ss in streams:
        m = min(chunk, remaining)
        rng = np.random.Generator(np.random.Philox(ss))
        phi = rng.uniform(-np.pi, np.pi, size=(m, n))
        r = np.abs(np.exp(1j * phi).sum(axis=1)) / n
        # tiny slack so R=0 counts every draw despite rounding
        hits += int(np.count_nonzero(r >= resultant_length - 1e-12))
        remaining -= m
    return (hits + 1) / (draws + 1)


def bh_fdr(p_values) -> np.ndarray:
    """Benjamini-Hochberg step-up adjusted p-values, in input order."""
    p = np.asarray(p_values, dtype=float).reshape(-1)
    m = p.size
    if m == 0:
        return p.copy()
    if np.any((p <= 0) | (p > 1)):
        raise ValueError("p-values must lie in (0, 1]")
    order = np.argsort(p, kind="stable")
    scaled = p[order] * m / np.arange(1, m + 1)
    adjusted = np.minimum.accumulate(scaled[::-1])[::-1]
    out = np.empty(m)
    out[order] = np.minimum(adjusted, 1.0)
    return out


def rose_histogram(phases, bins: int = 12):
    """Counts of phases in ``bins`` equal sectors covering ``[-pi, pi)``.

    Returns ``(counts, edges)`` with ``len(edges) == bins + 1``.
    """
    if bins < 1:
        raise ValueError("bins must be >= 1")
    edges = np.linspace(-np.pi, np.pi, bins + 1)
    idx = np.floor((wrap(phases) + np.pi) / (2 * np.pi) * bins).astype(int)
    counts = np.bincount(np.clip(idx, 0, bins - 1), minlength=bins)
    return counts, edges
