"""Welch power spectral density and dominant-period screening.

Frequencies are reported in cycles per day and power in signal units squared
per cycle/day, whatever the sampling step of the input.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .exceptions import DataError
from .timeseries import SECONDS_PER_DAY

DEFAULT_SEGMENT_DAYS = 60.0


@dataclass(frozen=True)
class WelchParams:
    segment_length: int
    overlap_fraction: float = 0.5
    window: str = "hann"
    detrend: str = "constant"

    def __post_init__(self):
        if self.segment_length < 8:
            raise ValueError("segment_length must be >= 8")
        if not 0 <= self.overlap_fraction < 1:
            raise ValueError("overlap_fraction must lie in [0, 1)")
        if self.window != "hann":
            raise ValueError("only the hann window is supported")
        if self.detrend not in ("constant", "linear", "none"):
            raise ValueError(f"unknown detrend {self.detrend!r}")

    @classmethod
    def default_for(cls, n_samples: int, step: float) -> "WelchParams":
        """60 days per segment, or the whole input if it is shorter."""
        seg = int(round(DEFAULT_SEGMENT_DAYS * SECONDS_PER_DAY / step))
        return cls(segment_length=max(8, min(seg, n_samples)))

    def to_dict(self) -> dict:
        return {
            "segment_length": self.segment_length,
            "overlap_fraction": self.overlap_fraction,
            "window": self.window,
            "detrend": self.detrend,
        }


@dataclass(frozen=True)
class PsdEstimate:
    frequencies: np.ndarray
    power: np.ndarray
    params: WelchParams = field(compare=False)
    n_segments: int = 1

    @property
    def periods(self) -> np.ndarray:
        """Period in days for each bin (inf at DC)."""
        with np.errstate(divide="ignore"):
            return 1.0 / self.frequencies


def hann(n: int) -> np.ndarray:
    """Periodic Hann window (the DFT-even form used for spectral averaging)."""
    return 0.5 - 0.5 * np.cos(2 * np.pi * np.arange(n) / n)


def _detrend(x, kind):
    if kind == "none":
        return x
    if kind == "constant":
        return x - x.mean()
    t = np.arange(x.size)
    slope, intercept = np.polyfit(t, x, 1)
    return x - (slope * t + intercept)


def _segment_starts(n, params):
    nperseg = params.segment_length
    hop = nperseg - int(np.floor(params.overlap_fraction * nperseg))
    return range(0, n - nperseg + 1, max(hop, 1))


def _periodograms(x, fs, params):
    """Yield one-sided modified periodograms for each Welch segment of ``x``."""
    nperseg = params.segment_length
    win = hann(nperseg)
    scale = 1.0 / (fs * np.sum(win ** 2))
    for s in _segment_starts(x.size, params):
        seg = _detrend(x[s:s + nperseg], params.detrend) * win
        p = np.abs(np.fft.rfft(seg)) ** 2 * scale
        # fold negative frequencies; DC and (even-length) Nyquist appear once
        if nperseg % 2 == 0:
            p[1:-1] *= 2
        else:
            p[1:] *= 2
        yield p


def welch_psd(values, step: float, params: WelchParams | None = None) -> PsdEstimate:
    """Welch PSD of a gap-free segment.

    Parameters
    ----------
    values : array_like
        Samples without missing values.
    step : float
        Sampling step in seconds.
    params : WelchParams, optional
        Defaults to :meth:`WelchParams.default_for`.
    """
    return welch_psd_segments([values], step, params)


def welch_psd_segments(segments, step: float, params: WelchParams | None = None) -> PsdEstimate:
    """Welch PSD pooled over several gap-free segments.

    Every window of every segment long enough to hold one is averaged with
    equal weight; shorter segments contribute nothing.
    """
    arrays = [np.asarray(s, dtype=float) for s in segments]
    if params is None:
        longest = max((a.size for a in arrays), default=0)
        params = WelchParams.default_for(longest, step)
    nperseg = params.segment_length
    fs = SECONDS_PER_DAY / step
    total = None
    count = 0
    for x in arrays:
        if np.any(np.isnan(x)):
            raise DataError("welch_psd input must not contain missing values")
        if x.size < nperseg:
            continue
        for p in _periodograms(x, fs, params):
            total = p if total is None else total + p
            count += 1
    if count == 0:
        raise DataError(f"input shorter than one Welch segment ({nperseg} samples)")
    freqs = np.fft.rfftfreq(nperseg, d=1.0 / fs)
    return PsdEstimate(freqs, total / count, params, count)


def dominant_period(psd: PsdEstimate, period_range) -> tuple[float, float]:
    """Period (days) and power of the strongest bin inside ``period_range``.

    Ties go to the shorter period.
    """
    low, high = period_range
    periods = psd.periods
    inside = np.flatnonzero((periods >= low) & (periods <= high))
    if inside.size == 0:
        raise DataError(f"no frequency bin has a period in [{low}, {high}] days")
    p = psd.power[inside]
    best = inside[p == p.max()]
    # highest frequency among ties = shortest period
    k = best[np.argmax(psd.frequencies[best])]
    return float(periods[k]), float(psd.power[k])
