"""Butterworth bandpass design and zero-phase forward-backward filtering.

Bands are given as period ranges in days. Designs go through the analog
lowpass prototype, the lowpass-to-bandpass transform and a pre-warped bilinear
transform, and are applied as a cascade of second-order sections. The expanded
``b``/``a`` polynomials are kept for inspection only: at hourly sampling the
multi-day bands put poles within ~1e-3 of the unit circle, where a single
direct-form recursion loses too much precision.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy import signal
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted

from .exceptions import DataError, NumericalError
from .timeseries import SECONDS_PER_DAY, Segment


@dataclass(frozen=True)
class BandSpec:
    """Period band ``[low_period, high_period]`` in days."""

    low_period: float
    high_period: float
    label: str = ""

    def __post_init__(self):
        # float canonical form keeps serialised configs stable across reloads
        object.__setattr__(self, "low_period", float(self.low_period))
        object.__setattr__(self, "high_period", float(self.high_period))
        if not 0 < self.low_period < self.high_period:
            raise ValueError(f"invalid band {self.low_period}-{self.high_period}: need 0 < low < high")
        if not self.label:
            object.__setattr__(self, "label", f"{self.low_period:g}-{self.high_period:g}")

    @classmethod
    def parse(cls, text: str) -> "BandSpec":
        """Parse ``"lo:hi"`` (days), e.g. ``"0.8:1.2"``."""
        try:
            lo, hi = (float(p) for p in text.split(":"))
        except ValueError:
            raise ValueError(f"band must look like lo:hi, got {text!r}") from None
        return cls(lo, hi)

    @property
    def slug(self) -> str:
        return f"{self.low_period:g}-{self.high_period:g}d".replace(".", "p")

    def contains_period(self, period_days: float) -> bool:
        return self.low_period <= period_days <= self.high_period

    def to_dict(self) -> dict:
        return {"low_period": self.low_period, "high_period": self.high_period, "label": self.label}


DEFAULT_BANDS = (
    BandSpec(0.8, 1.2, "0.8-1.2 (circadian)"),
    BandSpec(2, 5),
    BandSpec(3, 7),
    BandSpec(5, 9),
    BandSpec(7, 14),
    BandSpec(10, 20),
    BandSpec(14, 28),
)


@dataclass(frozen=True)
class IirCoefficients:
    numerator: np.ndarray
    denominator: np.ndarray
    order: int
    band: BandSpec
    sample_step: float
    sos: np.ndarray = field(repr=False)
    poles: np.ndarray = field(repr=False)
    zeros: np.ndarray = field(repr=False)
    gain: float = 1.0

    @property
    def pad_length(self) -> int:
        return 3 * (2 * self.order)


def _edges_hz(band: BandSpec):
    return 1.0 / (band.high_period * SECONDS_PER_DAY), 1.0 / (band.low_period * SECONDS_PER_DAY)


def _pair_poles(poles):
    """Group digital poles into conjugate (or real) pairs for biquads."""
    tol = 1e-12
    cplx = sorted((p for p in poles if p.imag > tol), key=lambda p: abs(p))
    real = sorted(p.real for p in poles if abs(p.imag) <= tol)
    pairs = [(p, np.conj(p)) for p in cplx]
    pairs += [(real[i], real[i + 1]) for i in range(0, len(real), 2)]
    return pairs


def design_bandpass(band: BandSpec, sample_step: float, order: int = 2) -> IirCoefficients:
    """Digital Butterworth bandpass with -3 dB corners at the band edges.

    Parameters
    ----------
    band : BandSpec
    sample_step : float
        Sampling step in seconds.
    order : int
        Prototype order (1 to 4). The bandpass has ``2 * order`` poles, and the
        forward-backward cascade doubles the magnitude roll-off again.
    """
    if order not in (1, 2, 3, 4):
        raise ValueError("order must be in 1..4")
    fs = 1.0 / sample_step
    f_lo, f_hi = _edges_hz(band)
    if f_hi >= fs / 2:
        raise DataError(f"band {band.label} reaches or exceeds the Nyquist frequency for step {sample_step} s")

    # pre-warp so the digital corners land exactly on f_lo, f_hi
    w_lo = 2 * fs * np.tan(np.pi * f_lo / fs)
    w_hi = 2 * fs * np.tan(np.pi * f_hi / fs)
    bw = w_hi - w_lo
    w0_sq = w_lo * w_hi

    k = np.arange(1, order + 1)
    proto = np.exp(1j * np.pi * (2 * k + order - 1) / (2 * order))

    disc = np.sqrt((proto * bw) ** 2 - 4 * w0_sq + 0j)
    analog_poles = np.concatenate([(proto * bw + disc) / 2, (proto * bw - disc) / 2])
    analog_gain = bw ** order

    fs2 = 2 * fs
    poles = (fs2 + analog_poles) / (fs2 - analog_poles)
    zeros = np.concatenate([np.ones(order), -np.ones(order)])
    # order analog zeros at s=0 contribute fs2 each; the rest sit at infinity
    gain = float(np.real(analog_gain * fs2 ** order / np.prod(fs2 - analog_poles)))

    if np.max(np.abs(poles)) >= 1:
        raise NumericalError(f"unstable design for band {band.label}")

    pairs = _pair_poles(poles)
    sec_gain = abs(gain) ** (1.0 / len(pairs))
    sos = np.zeros((len(pairs), 6))
    for i, (p1, p2) in enumerate(pairs):
        g = sec_gain * (np.sign(gain) if i == 0 else 1.0)
        sos[i, :3] = g * np.array([1.0, 0.0, -1.0])
        sos[i, 3:] = [1.0, -np.real(p1 + p2), np.real(p1 * p2)]

    a = np.real(np.poly(poles))
    b = gain * np.real(np.poly(zeros))
    return IirCoefficients(b, a, order, band, float(sample_step), sos, poles, zeros, gain)


def freq_response(coeffs: IirCoefficients, freqs_cpd) -> np.ndarray:
    """Complex response of the SOS cascade at frequencies in cycles/day."""
    f = np.asarray(freqs_cpd, dtype=float) / SECONDS_PER_DAY
    zinv = np.exp(-2j * np.pi * f * coeffs.sample_step)
    h = np.ones_like(zinv)
    for b0, b1, b2, a0, a1, a2 in coeffs.sos:
        h *= (b0 + b1 * zinv + b2 * zinv ** 2) / (a0 + a1 * zinv + a2 * zinv ** 2)
    return h


def _odd_extend(x, n):
    left = 2 * x[0] - x[n:0:-1]
    right = 2 * x[-1] - x[-2:-n - 2:-1]
    return np.concatenate([left, x, right])


def filtfilt(coeffs: IirCoefficients, values) -> np.ndarray:
    """Zero-phase forward-backward filtering.

    The input is extended at both ends by odd reflection of length
    ``3 * (2 * order)``. Each pass starts from the step-response steady state
    scaled by its first sample, and the padding is stripped at the end.
    """
    x = np.asarray(values, dtype=float)
    if x.ndim != 1:
        raise ValueError("filtfilt expects a 1-D array")
    if x.size <= 3 * (2 * coeffs.order + 1):
        raise DataError("segment too short for padding")
    pad = coeffs.pad_length
    ext = _odd_extend(x, pad)
    zi = signal.sosfilt_zi(coeffs.sos)
    y = signal.sosfilt(coeffs.sos, ext, zi=zi * ext[0])[0]
    y = signal.sosfilt(coeffs.sos, y[::-1], zi=zi * y[-1])[0][::-1]
    return y[pad:-pad]


def eligible_segments(segments: list[Segment], band: BandSpec) -> list[Segment]:
    """Keep segments spanning at least three cycles of the slowest band period."""
    min_duration = 3 * band.high_period * SECONDS_PER_DAY
    return [s for s in segments if s.duration >= min_duration - 1e-6]


class ButterworthBandpass(TransformerMixin, BaseEstimator):
    """Zero-phase Butterworth bandpass as a scikit-learn transformer.

    Filters each column of ``X`` along axis 0 (time).

    Parameters
    ----------
    low_period, high_period : float
        Band edges in days.
    step : float
        Sampling step in seconds.
    order : int
        Prototype order.
    demean : bool
        Subtract each column's mean before filtering.
    """

    def __init__(self, low_period=0.8, high_period=1.2, step=3600.0, order=2, demean=True):
        self.low_period = low_period
        self.high_period = high_period
        self.step = step
        self.order = order
        self.demean = demean

    def fit(self, X=None, y=None):
        self.coefficients_ = design_bandpass(BandSpec(self.low_period, self.high_period), self.step, self.order)
        return self

    def transform(self, X):
        check_is_fitted(self, "coefficients_")
        X = np.asarray(X, dtype=float)
        one_d = X.ndim == 1
        X = check_array(X.reshape(-1, 1) if one_d else X)
        if self.demean:
            X = X - X.mean(axis=0)
        out = np.column_stack([filtfilt(self.coefficients_, col) for col in X.T])
        return out[:, 0] if one_d else out
