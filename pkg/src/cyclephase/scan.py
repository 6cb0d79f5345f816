"""Band scan: filter, extract phase, map events and test for phase locking."""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np
from sklearn.base import BaseEstimator

from .analytic import AnalyticSeries, hilbert_analytic
from .circstats import bh_fdr, circular_mean, rayleigh_test, rayleigh_test_montecarlo, resultant_length, wrap
from .events import EventSet, PhaseSample, map_events_to_phase
from .filtering import DEFAULT_BANDS, BandSpec, design_bandpass, eligible_segments, filtfilt
from .timeseries import RegularSeries, contiguous_segments, local_hour


@dataclass(frozen=True)
class ScanConfig:
    order: int = 2
    tolerance: float | None = None  # seconds; None means half the grid step
    mc_draws: int = 0
    seed: int = 0
    tz_offset_minutes: int = 0


@dataclass(frozen=True)
class BandResult:
    band: BandSpec
    n: int
    resultant_length: float | None
    circular_mean: float | None
    rayleigh_p: float | None
    fdr_adjusted_p: float | None = None
    n_edge_flagged: int = 0
    n_excluded: int = 0
    n_segments: int = 0
    rayleigh_p_mc: float | None = None
    circular_mean_clock_hours: float | None = None
    samples: tuple[PhaseSample, ...] = field(default=(), repr=False, compare=False)
    analytic: tuple[AnalyticSeries, ...] = field(default=(), repr=False, compare=False)

    @property
    def phases(self) -> np.ndarray:
        return np.array([s.phase for s in self.samples])

    def to_dict(self) -> dict:
        return {
            "band": self.band.label,
            "slug": self.band.slug,
            "low_period_days": self.band.low_period,
            "high_period_days": self.band.high_period,
            "n": self.n,
            "n_excluded": self.n_excluded,
            "n_edge_flagged": self.n_edge_flagged,
            "n_segments": self.n_segments,
            "R": self.resultant_length,
            "circular_mean_rad": self.circular_mean,
            "circular_mean_clock_hours": self.circular_mean_clock_hours,
            "p": self.rayleigh_p,
            "p_fdr": self.fdr_adjusted_p,
            "p_mc": self.rayleigh_p_mc,
        }


def band_analytic(series: RegularSeries, band: BandSpec, order: int = 2) -> list[AnalyticSeries]:
    """Phase/amplitude for every segment of ``series`` long enough for ``band``.

    Each eligible segment is mean-centred, filtered forward-backward and passed
    through the Hilbert transform on its own.
    """
    segments = eligible_segments(contiguous_segments(series), band)
    if not segments:
        return []
    coeffs = design_bandpass(band, series.step, order)
    out = []
    for seg in segments:
        x = seg.values - seg.values.mean()
        out.append(hilbert_analytic(filtfilt(coeffs, x), seg.start_time, series.step, band))
    return out


def phase_clock_hours(analytic: list[AnalyticSeries], phase: float, tz_offset_minutes: int = 0) -> float | None:
    """Typical local clock hour at which the band passes through ``phase``.

    Circular mean of the local hour over samples whose phase lies within
    pi/24 of the target. Only meaningful for bands around one day.
    """
    hours = []
    for a in analytic:
        near = np.abs(wrap(a.phase - phase)) < np.pi / 24
        hours.append(local_hour(a.times[near], tz_offset_minutes))
    h = np.concatenate(hours) if hours else np.empty(0)
    if h.size == 0:
        return None
    ang = np.angle(np.sum(np.exp(1j * 2 * np.pi * h / 24)))
    return float(np.mod(ang / (2 * np.pi) * 24, 24))


def scan_band(series: RegularSeries, events: EventSet, band: BandSpec, config: ScanConfig = ScanConfig()) -> BandResult:
    """Phase-locking statistics for one band (no FDR adjustment)."""
    analytic = band_analytic(series, band, config.order)
    tol = series.step / 2 if config.tolerance is None else config.tolerance
    mapped, excluded = map_events_to_phase(events, analytic, tol)
    n = len(mapped)
    common = dict(
        band=band, n=n, n_excluded=len(excluded), n_segments=len(analytic),
        n_edge_flagged=sum(s.edge_flagged for s in mapped),
        samples=tuple(mapped), analytic=tuple(analytic),
    )
    if n == 0:
        return BandResult(resultant_length=None, circular_mean=None, rayleigh_p=None, **common)
    phases = np.array([s.phase for s in mapped])
    r = resultant_length(phases)
    mean = circular_mean(phases) if r > 1e-12 else None
    p = rayleigh_test(n, r) if n >= 3 else None
    p_mc = None
    if config.mc_draws and n >= 3:
        p_mc = rayleigh_test_montecarlo(n, r, config.mc_draws, config.seed)
    clock = None
    if mean is not None and band.contains_period(1.0):
        clock = phase_clock_hours(analytic, mean, config.tz_offset_minutes)
    return BandResult(resultant_length=r, circular_mean=mean, rayleigh_p=p, rayleigh_p_mc=p_mc,
                      circular_mean_clock_hours=clock, **common)


def _with_fdr(results: list[BandResult]) -> list[BandResult]:
    idx = [i for i, r in enumerate(results) if r.rayleigh_p is not None]
    adjusted = bh_fdr([results[i].rayleigh_p for i in idx])
    out = list(results)
    for i, q in zip(idx, adjusted):
        out[i] = replace(results[i], fdr_adjusted_p=float(q))
    return out


def band_scan(series: RegularSeries, events: EventSet, bands=DEFAULT_BANDS, config: ScanConfig = ScanConfig()) -> list[BandResult]:
    """Scan ``bands`` and add Benjamini-Hochberg p-values across all of them.

    Bands with fewer than three mapped events carry no p-value and are left
    out of the FDR family.
    """
    bands = list(bands)
    if not bands:
        raise ValueError("bands must be non-empty")
    return _with_fdr([scan_band(series, events, b, config) for b in bands])


class PhaseLockingScan(BaseEstimator):
    """Estimator wrapper around :func:`band_scan`.

    ``fit(series, events)`` stores ``results_`` (one :class:`BandResult` per
    band); ``transform`` returns the table as an ``(n_bands, 4)`` array of
    ``[n, R, p, p_fdr]`` with NaN where undefined.
    """

    def __init__(self, bands=DEFAULT_BANDS, order=2, tolerance=None, mc_draws=0, seed=0, tz_offset_minutes=0):
        self.bands = bands
        self.order = order
        self.tolerance = tolerance
        self.mc_draws = mc_draws
        self.seed = seed
        self.tz_offset_minutes = tz_offset_minutes

    def fit(self, series: RegularSeries, events: EventSet):
        cfg = ScanConfig(self.order, self.tolerance, self.mc_draws, self.seed, self.tz_offset_minutes)
        self.results_ = band_scan(series, events, self.bands, cfg)
        return self

    def transform(self, X=None):
        def num(v):
            return np.nan if v is None else v
        return np.array([[r.n, num(r.resultant_length), num(r.rayleigh_p), num(r.fdr_adjusted_p)]
                         for r in self.results_])
