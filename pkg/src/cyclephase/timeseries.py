"""Irregular and gridded time series.

Timestamps are float seconds since the Unix epoch (UTC). Gridded series store
missing samples as NaN. All containers are frozen and hold read-only arrays, so
the functions below never mutate their inputs.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .exceptions import DataError

SECONDS_PER_HOUR = 3600.0
SECONDS_PER_DAY = 86400.0


def _frozen(a, dtype=float):
    arr = np.array(a, dtype=dtype, copy=True)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class IrregularSeries:
    """Raw samples at arbitrary, strictly increasing times."""

    timestamps: np.ndarray
    values: np.ndarray
    unit: str = ""

    def __post_init__(self):
        t = _frozen(self.timestamps)
        v = _frozen(self.values)
        if t.ndim != 1 or t.shape != v.shape:
            raise DataError("timestamps and values must be 1-D arrays of equal length")
        if not np.all(np.isfinite(t)) or not np.all(np.isfinite(v)):
            raise DataError("irregular series must not contain NaN or inf")
        if t.size > 1 and np.any(np.diff(t) <= 0):
            raise DataError("timestamps must be strictly increasing")
        object.__setattr__(self, "timestamps", t)
        object.__setattr__(self, "values", v)

    def __len__(self):
        return self.timestamps.size


@dataclass(frozen=True)
class RegularSeries:
    """Uniformly gridded signal; sample ``i`` sits at ``start + i * step``."""

    start: float
    step: float
    values: np.ndarray
    unit: str = ""

    def __post_init__(self):
        if not self.step > 0:
            raise DataError("step must be positive")
        v = _frozen(self.values)
        if v.ndim != 1 or v.size < 1:
            raise DataError("regular series needs at least one sample")
        if np.any(np.isinf(v)):
            raise DataError("regular series values must be finite or NaN")
        object.__setattr__(self, "values", v)
        object.__setattr__(self, "start", float(self.start))
        object.__setattr__(self, "step", float(self.step))

    def __len__(self):
        return self.values.size

    @property
    def times(self) -> np.ndarray:
        return self.start + self.step * np.arange(self.values.size)

    @property
    def missing(self) -> np.ndarray:
        return np.isnan(self.values)

    def with_values(self, values) -> "RegularSeries":
        return RegularSeries(self.start, self.step, values, self.unit)


@dataclass(frozen=True)
class Segment:
    """A maximal run of present samples inside a :class:`RegularSeries`."""

    parent: RegularSeries = field(repr=False)
    start_index: int
    length: int

    @property
    def values(self) -> np.ndarray:
        return self.parent.values[self.start_index:self.start_index + self.length]

    @property
    def start_time(self) -> float:
        return self.parent.start + self.start_index * self.parent.step

    @property
    def duration(self) -> float:
        """Covered time span, counting each sample as one full step."""
        return self.length * self.parent.step


def resample_to_grid(series: IrregularSeries, step: float, aggregator: str = "mean") -> RegularSeries:
    """Bin irregular samples onto a regular grid.

    The grid origin is the first timestamp truncated down to a whole multiple
    of ``step`` (epoch based, so it is independent of any timezone). Each bin
    covers ``[t, t + step)``; empty bins become NaN.

    Parameters
    ----------
    series : IrregularSeries
    step : float
        Grid spacing in seconds.
    aggregator : {"mean", "median"}

    Returns
    -------
    RegularSeries
    """
    if len(series) == 0:
        raise DataError("no samples")
    if not step > 0:
        raise DataError("step must be positive")
    if aggregator not in ("mean", "median"):
        raise ValueError(f"unknown aggregator {aggregator!r}")

    t = series.timestamps
    start = np.floor(t[0] / step) * step
    idx = np.floor((t - start) / step).astype(np.int64)
    n_bins = int(idx[-1]) + 1

    if aggregator == "mean":
        sums = np.bincount(idx, weights=series.values, minlength=n_bins)
        counts = np.bincount(idx, minlength=n_bins)
        with np.errstate(invalid="ignore", divide="ignore"):
            out = sums / counts
        out[counts == 0] = np.nan
    else:
        out = np.full(n_bins, np.nan)
        # idx is sorted because timestamps are
        bounds = np.flatnonzero(np.diff(idx)) + 1
        for chunk_idx, chunk in zip(np.split(idx, bounds), np.split(series.values, bounds)):
            out[chunk_idx[0]] = np.median(chunk)
    return RegularSeries(start, step, out, series.unit)


def _missing_runs(missing: np.ndarray):
    """Yield ``(start, stop)`` for each run of True values."""
    padded = np.concatenate(([False], missing, [False])).astype(np.int8)
    d = np.diff(padded)
    return zip(np.flatnonzero(d == 1), np.flatnonzero(d == -1))


def interpolate_gaps(series: RegularSeries, max_gap: int) -> RegularSeries:
    """Linearly fill interior runs of at most ``max_gap`` missing samples.

    Runs that touch either end of the series are left missing, as are runs
    longer than ``max_gap``. Present values are never modified.
    """
    if max_gap < 0:
        raise ValueError("max_gap must be >= 0")
    v = np.array(series.values)
    n = v.size
    for lo, hi in _missing_runs(np.isnan(v)):
        if lo == 0 or hi == n or hi - lo > max_gap:
            continue
        left, right = v[lo - 1], v[hi]
        frac = np.arange(1, hi - lo + 1) / (hi - lo + 1)
        v[lo:hi] = left + frac * (right - left)
    return series.with_values(v)


def zscore(series: RegularSeries) -> RegularSeries:
    """Standardise with one mean and one population std over all present values."""
    v = series.values
    present = v[~np.isnan(v)]
    if present.size < 2:
        raise DataError("zscore needs at least 2 present values")
    mu = present.mean()
    sd = present.std()
    if sd == 0:
        raise DataError("constant signal")
    return series.with_values((v - mu) / sd)


def shift_daily(series: RegularSeries, shift_days: int) -> RegularSeries:
    """Move each daily value ``shift_days`` days later on the same grid.

    Leading slots become missing and trailing values fall off the end, so the
    length is unchanged. Used to assign a night's sleep score to the next day.
    """
    if not np.isclose(series.step, SECONDS_PER_DAY):
        raise DataError("shift_daily requires a daily step")
    v = series.values
    out = np.full(v.size, np.nan)
    k = int(shift_days)
    if k >= 0:
        if k < v.size:
            out[k:] = v[:v.size - k]
    else:
        if -k < v.size:
            out[:k] = v[-k:]
    return series.with_values(out)


def contiguous_segments(series: RegularSeries) -> list[Segment]:
    """Maximal runs of present samples, in temporal order."""
    present = ~np.isnan(series.values)
    return [Segment(series, int(lo), int(hi - lo)) for lo, hi in _missing_runs(present)]


def local_hour(timestamps, tz_offset_minutes: int = 0) -> np.ndarray:
    """Hour of day in ``[0, 24)`` at a fixed UTC offset."""
    t = np.asarray(timestamps, dtype=float) + 60.0 * tz_offset_minutes
    return np.mod(t, SECONDS_PER_DAY) / SECONDS_PER_HOUR
