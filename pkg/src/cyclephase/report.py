"""End-to-end analysis run: ingestion, spectra, band scan, baselines, files."""

from __future__ import annotations

import hashlib
import json
import logging
import platform
from datetime import datetime, timezone
from pathlib import Path

import numpy as np
import scipy
import sklearn

from . import __version__
from .baselines import PREDICTOR_KINDS, build_design, fit_logistic, prepare_sleep
from .circstats import rose_histogram
from .config import RunConfig
from .events import EventSet
from .exceptions import DataError
from .io import read_events_csv, read_series_csv, write_table
from .plotting import emit_rose_svg
from .scan import BandResult, ScanConfig, band_analytic, band_scan
from .spectral import PsdEstimate, WelchParams, welch_psd_segments
from .timeseries import (SECONDS_PER_DAY, RegularSeries, contiguous_segments, interpolate_gaps,
                         resample_to_grid, zscore)

log = logging.getLogger(__name__)


def _require(path, what):
    if path is None:
        raise DataError(f"{what} file not given")
    if not Path(path).is_file():
        raise DataError(f"{what} file not found: {path}")
    return path


def load_ibi(config: RunConfig) -> RegularSeries:
    raw = read_series_csv(_require(config.ibi_path, "ibi"), unit="ms")
    grid = resample_to_grid(raw, config.step_seconds, "mean")
    return zscore(interpolate_gaps(grid, config.ibi_max_gap_samples))


def load_events(config: RunConfig) -> EventSet:
    return read_events_csv(_require(config.events_path, "events"), label="events")


def load_sleep(config: RunConfig) -> RegularSeries | None:
    if config.sleep_path is None:
        return None
    raw = read_series_csv(_require(config.sleep_path, "sleep"), unit="score")
    daily = resample_to_grid(raw, SECONDS_PER_DAY, "mean")
    return prepare_sleep(daily, config.sleep_max_gap_days)


def scan_config(config: RunConfig) -> ScanConfig:
    return ScanConfig(order=config.filter_order, tolerance=config.tolerance_seconds, mc_draws=config.mc_draws,
                      seed=config.seed, tz_offset_minutes=config.timezone_offset_minutes)


def compute_psd(series: RegularSeries, config: RunConfig) -> PsdEstimate:
    """Welch PSD pooled over gap-free segments of the gridded signal."""
    segs = [s.values for s in contiguous_segments(series)]
    if not segs:
        raise DataError("signal has no present samples")
    longest = max(s.size for s in segs)
    nper = int(round(config.welch_segment_days * SECONDS_PER_DAY / series.step))
    params = WelchParams(max(8, min(nper, longest)), config.welch_overlap, "hann", config.welch_detrend)
    return welch_psd_segments(segs, series.step, params)


def psd_rows(psd: PsdEstimate):
    return [(repr(float(1.0 / f)), repr(float(f)), repr(float(p)))
            for f, p in zip(psd.frequencies, psd.power) if f > 0]


def phase_rows(result: BandResult):
    return [(repr(float(s.event_time)), repr(float(s.phase)), repr(float(s.amplitude)), repr(float(s.sample_offset)),
             int(s.edge_flagged))
            for s in result.samples]


def analytic_rows(analytic):
    rows = []
    for a in analytic:
        for t, ph, amp, edge in zip(a.times, a.phase, a.amplitude, a.edge):
            rows.append((repr(float(t)), repr(float(ph)), repr(float(amp)), int(edge)))
    return rows


def rose_rows(result: BandResult, bins: int):
    counts, edges = rose_histogram(result.phases, bins)
    return [(k, repr(float(edges[k])), repr(float(edges[k + 1])), int(c)) for k, c in enumerate(counts)]


def run_baseline(kind: str, series: RegularSeries, analytic, sleep, events: EventSet, config: RunConfig) -> dict:
    design = build_design(series, analytic, sleep, events, kind, config.timezone_offset_minutes)
    fit = fit_logistic(design, ridge=config.ridge)
    out = fit.to_dict()
    out.update(predictor=kind, feature_names=list(design.feature_names), n_rows=int(design.y.size),
               n_positive=design.n_positive)
    return out


def dump_json(path: Path, obj) -> None:
    path.write_text(json.dumps(obj, indent=2, sort_keys=True, allow_nan=False) + "\n")


def _sha256(path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def run_report(config: RunConfig) -> dict:
    """Run the whole analysis and write every report file into ``output_dir``.

    Returns a mapping from artifact name to written path.
    """
    ibi = load_ibi(config)
    events = load_events(config)
    sleep = load_sleep(config)
    out = Path(config.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = {}

    psd = compute_psd(ibi, config)
    write_table(out / "psd.csv", ["period_days", "frequency_cpd", "power"], psd_rows(psd))
    dump_json(out / "psd_params.json", {**psd.params.to_dict(), "n_segments": psd.n_segments})
    written["psd"] = out / "psd.csv"

    results = band_scan(ibi, events, config.bands, scan_config(config))
    dump_json(out / "bandscan.json", {
        "n_events": len(events),
        "tolerance_seconds": config.tolerance_seconds,
        "fdr_family": "all bands with a Rayleigh p-value",
        "bands": [r.to_dict() for r in results],
    })
    written["bandscan"] = out / "bandscan.json"

    for r in results:
        slug = r.band.slug
        write_table(out / f"phases_{slug}.csv",
                    ["event_timestamp", "phase_rad", "amplitude", "sample_offset_s", "edge_flag"], phase_rows(r))
        write_table(out / f"rose_{slug}.csv", ["bin", "lower_rad", "upper_rad", "count"],
                    rose_rows(r, config.rose_bins))
        counts, _ = rose_histogram(r.phases, config.rose_bins)
        (out / f"rose_{slug}.svg").write_text(
            emit_rose_svg(counts, r.circular_mean, r.resultant_length, title=r.band.label))

    phase_result = next((r for r in results if r.band == config.phase_band), None)
    analytic = list(phase_result.analytic) if phase_result else band_analytic(ibi, config.phase_band, config.filter_order)
    baselines = {}
    for kind in PREDICTOR_KINDS:
        if kind == "sleep_score" and sleep is None:
            continue
        try:
            baselines[kind] = run_baseline(kind, ibi, analytic, sleep, events, config)
        except DataError as exc:
            log.warning("baseline %s skipped: %s", kind, exc)
            baselines[kind] = {"predictor": kind, "error": str(exc)}
    dump_json(out / "baselines.json", baselines)
    written["baselines"] = out / "baselines.json"

    inputs = {k: {"path": str(p), "sha256": _sha256(p)}
              for k, p in (("ibi", config.ibi_path), ("events", config.events_path), ("sleep", config.sleep_path))
              if p is not None}
    dump_json(out / "run_manifest.json", {
        "config": config.to_dict(),
        "inputs": inputs,
        "versions": {"cyclephase": __version__, "numpy": np.__version__, "scipy": scipy.__version__,
                     "scikit-learn": sklearn.__version__, "python": platform.python_version()},
        "created_utc": datetime.now(timezone.utc).isoformat(timespec="seconds"),
    })
    written["manifest"] = out / "run_manifest.json"
    return written
