"""Event sets and nearest-sample phase mapping."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .analytic import AnalyticSeries
from .exceptions import DataError
from .filtering import BandSpec


@dataclass(frozen=True)
class EventSet:
    onsets: np.ndarray
    label: str = "events"

    def __post_init__(self):
        t = np.array(self.onsets, dtype=float, copy=True).reshape(-1)
        if not np.all(np.isfinite(t)):
            raise DataError("event onsets must be finite")
        if t.size > 1 and np.any(np.diff(t) <= 0):
            raise DataError("event onsets must be strictly increasing")
        t.setflags(write=False)
        object.__setattr__(self, "onsets", t)

    def __len__(self):
        return self.onsets.size


@dataclass(frozen=True)
class PhaseSample:
    event_time: float
    phase: float
    amplitude: float
    band: BandSpec
    sample_offset: float
    edge_flagged: bool


def map_events_to_phase(events: EventSet, analytic: list[AnalyticSeries], tolerance: float):
    """Map each event to the nearest phase estimate across all segments.

    Parameters
    ----------
    events : EventSet
    analytic : list of AnalyticSeries
        Segments of one band, in any order.
    tolerance : float
        Largest allowed ``|event - sample time|`` in seconds.

    Returns
    -------
    mapped : list of PhaseSample
    excluded : list of float
        Onsets with no sample within ``tolerance``.

    Notes
    -----
    Equidistant samples resolve to the earlier one.
    """
    if tolerance < 0:
        raise ValueError("tolerance must be >= 0")
    if analytic:
        order = np.argsort([a.start for a in analytic], kind="stable")
        segs = [analytic[i] for i in order]
        times = np.concatenate([a.times for a in segs])
        phase = np.concatenate([a.phase for a in segs])
        amp = np.concatenate([a.amplitude for a in segs])
        edge = np.concatenate([a.edge for a in segs])
        band = segs[0].band
    else:
        times = np.empty(0)

    mapped, excluded = [], []
    for e in events.onsets:
        if times.size == 0:
            excluded.append(float(e))
            continue
        j = int(np.searchsorted(times, e, side="left"))
        candidates = [i for i in (j - 1, j) if 0 <= i < times.size]
        # earlier candidate first, so min() keeps it on ties
        k = min(candidates, key=lambda i: abs(times[i] - e))
        offset = float(e - times[k])
        if abs(offset) > tolerance:
            excluded.append(float(e))
            continue
        mapped.append(PhaseSample(float(e), float(phase[k]), float(amp[k]), band, offset, bool(edge[k])))
    return mapped, excluded
