"""Synthetic ground truth: oscillatory series and phase-locked events.

Everything is deterministic given ``SynthConfig.seed``. The noise, the events
and the auxiliary sleep score draw from separate child streams of that seed,
so changing ``event_count`` does not perturb the series noise.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, field

import numpy as np

from .analytic import AnalyticSeries, edge_mask
from .circstats import wrap
from .events import EventSet
from .exceptions import DataError
from .filtering import BandSpec
from .timeseries import SECONDS_PER_DAY, SECONDS_PER_HOUR, RegularSeries

DEFAULT_START = 1704067200.0  # 2024-01-01T00:00:00Z


@dataclass(frozen=True)
class SynthConfig:
    duration_days: float = 176.0
    step: float = SECONDS_PER_HOUR
    components: tuple = ((1.0, 1.0, 0.0),)  # (period_days, amplitude, initial_phase)
    noise_sd: float = 1.0
    missing_spec: tuple = ()  # (start_day, length_hours)
    event_count: int = 29
    lock_band_index: int | None = 0
    vonmises_mu: float = 0.0
    vonmises_kappa: float = 0.0
    seed: int = 0
    start: float = DEFAULT_START

    def __post_init__(self):
        if not self.duration_days > 0:
            raise ValueError("duration_days must be positive")
        if self.vonmises_kappa < 0:
            raise ValueError("vonmises_kappa must be >= 0")
        if self.event_count < 0:
            raise ValueError("event_count must be >= 0")
        object.__setattr__(self, "components", tuple(tuple(map(float, c)) for c in self.components))
        object.__setattr__(self, "missing_spec", tuple(tuple(map(float, m)) for m in self.missing_spec))

    @property
    def n_samples(self) -> int:
        return int(round(self.duration_days * SECONDS_PER_DAY / self.step))

    def to_dict(self) -> dict:
        d = asdict(self)
        d["components"] = [list(c) for c in self.components]
        d["missing_spec"] = [list(m) for m in self.missing_spec]
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "SynthConfig":
        return cls(**d)


def _streams(seed):
    noise, events, sleep = np.random.SeedSequence(seed).spawn(3)
    return np.random.default_rng(noise), np.random.default_rng(events), np.random.default_rng(sleep)


def _time_days(config):
    return np.arange(config.n_samples) * config.step / SECONDS_PER_DAY


def missing_mask(config: SynthConfig) -> np.ndarray:
    t = _time_days(config)
    mask = np.zeros(t.size, dtype=bool)
    for start_day, length_hours in config.missing_spec:
        mask |= (t >= start_day) & (t < start_day + length_hours / 24.0)
    return mask


def gen_series(config: SynthConfig) -> RegularSeries:
    """Sum of cosine components plus Gaussian noise, with spans set missing."""
    noise_rng, _, _ = _streams(config.seed)
    t = _time_days(config)
    x = np.zeros(t.size)
    for period, amplitude, phase0 in config.components:
        x += amplitude * np.cos(2 * np.pi * t / period + phase0)
    if config.noise_sd > 0:
        x += noise_rng.normal(0.0, config.noise_sd, t.size)
    x[missing_mask(config)] = np.nan
    return RegularSeries(config.start, config.step, x, "synthetic")


def component_phase(config: SynthConfig, index: int | None = None) -> AnalyticSeries:
    """Noise-free phase of one component over the full grid."""
    index = config.lock_band_index if index is None else index
    if index is None or not config.components:
        raise DataError("no component to take the phase of")
    period, amplitude, phase0 = config.components[index]
    t = _time_days(config)
    band = BandSpec(0.8 * period, 1.2 * period)
    n = t.size
    return AnalyticSeries(
        config.start, config.step, wrap(2 * np.pi * t / period + phase0), np.full(n, abs(amplitude)),
        band, edge_mask(n, config.step, band), np.zeros(n, dtype=bool),
    )


def gen_locked_events(config: SynthConfig, truth_phase: AnalyticSeries) -> EventSet:
    """Draw ``event_count`` events whose phases follow von Mises(mu, kappa).

    Candidate samples are proposed uniformly among covered (non-missing) grid
    points and accepted with probability ``exp(kappa * (cos(phi - mu) - 1))``;
    each sample is used at most once. The onset is placed uniformly within the
    first half-step after the accepted sample so it maps back to that sample.
    """
    if config.event_count < 1:
        raise DataError("event_count must be >= 1")
    _, rng, _ = _streams(config.seed)
    covered = np.flatnonzero(~missing_mask(config)[:len(truth_phase)])
    if covered.size == 0:
        raise DataError("no covered samples")
    if config.event_count > covered.size:
        raise DataError("more events requested than covered samples")
    accept_prob = np.exp(config.vonmises_kappa * (np.cos(truth_phase.phase[covered] - config.vonmises_mu) - 1))
    chosen: set[int] = set()
    while len(chosen) < config.event_count:
        batch = rng.integers(0, covered.size, size=4 * config.event_count)
        u = rng.random(batch.size)
        for j, ok in zip(batch, u < accept_prob[batch]):
            if ok and j not in chosen:
                chosen.add(int(j))
                if len(chosen) == config.event_count:
                    break
    idx = covered[sorted(chosen)]
    jitter = rng.uniform(0.0, 0.5 * config.step, idx.size)
    return EventSet(truth_phase.start + idx * truth_phase.step + jitter, "synthetic")


def gen_sleep(config: SynthConfig) -> RegularSeries:
    """Daily N(0, 1) sleep scores carrying no event information."""
    _, _, rng = _streams(config.seed)
    n_days = int(np.ceil(config.duration_days))
    start = np.floor(config.start / SECONDS_PER_DAY) * SECONDS_PER_DAY
    return RegularSeries(start, SECONDS_PER_DAY, rng.normal(0.0, 1.0, n_days), "score")


@dataclass(frozen=True)
class SynthDataset:
    series: RegularSeries
    events: EventSet
    truth: AnalyticSeries | None
    sleep: RegularSeries
    config: SynthConfig = field(repr=False)


def gen_dataset(config: SynthConfig) -> SynthDataset:
    series = gen_series(config)
    if config.lock_band_index is not None:
        truth = component_phase(config)
    else:
        # unlocked: a flat phase makes every covered sample equally likely
        truth = AnalyticSeries(config.start, config.step, np.zeros(len(series)), np.zeros(len(series)),
                               BandSpec(0.8, 1.2), np.zeros(len(series), bool), np.ones(len(series), bool))
    events = gen_locked_events(config, truth) if config.event_count else EventSet([])
    return SynthDataset(series, events, truth if config.lock_band_index is not None else None,
                        gen_sleep(config), config)
