"""Analytic signal, instantaneous phase and amplitude."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_array

from .exceptions import DataError
from .filtering import BandSpec
from .timeseries import SECONDS_PER_DAY

LOW_CONFIDENCE_RATIO = 1e-9


@dataclass(frozen=True)
class AnalyticSeries:
    """Instantaneous phase/amplitude on the grid of one filtered segment.

    ``edge`` marks samples within half the slowest band period of either end
    of the segment; ``low_confidence`` marks samples whose amplitude is below
    ``1e-9`` of the segment maximum (their phase is essentially arbitrary).
    """

    start: float
    step: float
    phase: np.ndarray
    amplitude: np.ndarray
    band: BandSpec
    edge: np.ndarray
    low_confidence: np.ndarray

    def __len__(self):
        return self.phase.size

    @property
    def times(self) -> np.ndarray:
        return self.start + self.step * np.arange(self.phase.size)


def analytic_signal(values) -> np.ndarray:
    """``x + i * H[x]`` built in the frequency domain.

    Negative frequencies are zeroed, positive ones doubled; DC and (for even
    lengths) Nyquist are kept as they are.
    """
    x = np.asarray(values, dtype=float)
    n = x.size
    if n == 0:
        raise DataError("analytic signal of an empty array")
    spectrum = np.fft.fft(x)
    h = np.zeros(n)
    h[0] = 1.0
    if n % 2 == 0:
        h[n // 2] = 1.0
        h[1:n // 2] = 2.0
    else:
        h[1:(n + 1) // 2] = 2.0
    return np.fft.ifft(spectrum * h)


def edge_mask(n: int, step: float, band: BandSpec) -> np.ndarray:
    k = int(np.ceil(0.5 * band.high_period * SECONDS_PER_DAY / step))
    mask = np.zeros(n, dtype=bool)
    mask[:k] = True
    mask[max(n - k, 0):] = True
    return mask


def hilbert_analytic(values, start: float, step: float, band: BandSpec) -> AnalyticSeries:
    """Phase ``arg(z)`` in ``[-pi, pi]`` and amplitude ``|z|`` of a band-limited segment.

    Zero-amplitude samples get phase 0 by convention.
    """
    x = np.asarray(values, dtype=float)
    if x.size == 0:
        raise DataError("empty input")
    if np.any(np.isnan(x)):
        raise DataError("hilbert_analytic input must not contain missing values")
    z = analytic_signal(x)
    amplitude = np.abs(z)
    phase = np.where(amplitude > 0, np.angle(z), 0.0)
    peak = amplitude.max()
    low = amplitude <= LOW_CONFIDENCE_RATIO * peak if peak > 0 else np.ones(x.size, dtype=bool)
    return AnalyticSeries(
        float(start), float(step), phase, amplitude, band, edge_mask(x.size, step, band), low
    )


class HilbertPhase(TransformerMixin, BaseEstimator):
    """Transformer mapping each column to its instantaneous phase or amplitude.

    ``output="phase"`` returns radians in ``[-pi, pi]``; ``"amplitude"``
    returns the envelope; ``"both"`` returns ``[phase, amplitude]`` column
    pairs (only for single-column input).
    """

    def __init__(self, output="phase"):
        self.output = output

    def fit(self, X=None, y=None):
        if self.output not in ("phase", "amplitude", "both"):
            raise ValueError(f"unknown output {self.output!r}")
        return self

    def transform(self, X):
        X = np.asarray(X, dtype=float)
        one_d = X.ndim == 1
        X = check_array(X.reshape(-1, 1) if one_d else X)
        z = np.column_stack([analytic_signal(col) for col in X.T])
        amp = np.abs(z)
        phase = np.where(amp > 0, np.angle(z), 0.0)
        if self.output == "both":
            if X.shape[1] != 1:
                raise ValueError('output="both" needs single-column input')
            return np.column_stack([phase[:, 0], amp[:, 0]])
        out = phase if self.output == "phase" else amp
        return out[:, 0] if one_d else out
