"""Run configuration. Defaults are the processing choices of the reference analysis."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path

from .filtering import DEFAULT_BANDS, BandSpec


def _band_from(obj) -> BandSpec:
    if isinstance(obj, BandSpec):
        return obj
    if isinstance(obj, str):
        return BandSpec.parse(obj)
    if isinstance(obj, dict):
        return BandSpec(float(obj["low_period"]), float(obj["high_period"]), obj.get("label", ""))
    lo, hi = obj
    return BandSpec(float(lo), float(hi))


@dataclass(frozen=True)
class RunConfig:
    ibi_path: str | None = None
    events_path: str | None = None
    sleep_path: str | None = None
    timezone_offset_minutes: int = 0
    step_minutes: int = 60
    ibi_max_gap_hours: int = 6
    sleep_max_gap_days: int = 2
    bands: tuple[BandSpec, ...] = DEFAULT_BANDS
    welch_segment_days: float = 60.0
    welch_overlap: float = 0.5
    welch_detrend: str = "constant"
    filter_order: int = 2
    mapping_tolerance_minutes: float | None = None  # None: half the grid step
    rose_bins: int = 12
    ridge: float = 1e-4
    mc_draws: int = 0
    seed: int = 0
    output_dir: str = "cyclephase_out"
    phase_band: BandSpec = field(default=DEFAULT_BANDS[0])

    def __post_init__(self):
        object.__setattr__(self, "bands", tuple(_band_from(b) for b in self.bands))
        object.__setattr__(self, "phase_band", _band_from(self.phase_band))
        if self.step_minutes <= 0:
            raise ValueError("step_minutes must be positive")
        if self.rose_bins < 4:
            raise ValueError("rose_bins must be >= 4")
        if not 1 <= self.filter_order <= 4:
            raise ValueError("filter_order must be in 1..4")
        if not 0 <= self.welch_overlap < 1:
            raise ValueError("welch_overlap must be in [0, 1)")
        if self.welch_detrend not in ("constant", "linear", "none"):
            raise ValueError(f"unknown welch_detrend {self.welch_detrend!r}")
        if self.ibi_max_gap_hours < 0 or self.sleep_max_gap_days < 0:
            raise ValueError("gap limits must be >= 0")
        if self.ridge < 0 or self.mc_draws < 0:
            raise ValueError("ridge and mc_draws must be >= 0")

    @property
    def step_seconds(self) -> float:
        return 60.0 * self.step_minutes

    @property
    def ibi_max_gap_samples(self) -> int:
        return int(self.ibi_max_gap_hours * 60 // self.step_minutes)

    @property
    def tolerance_seconds(self) -> float:
        if self.mapping_tolerance_minutes is None:
            return self.step_seconds / 2
        return 60.0 * self.mapping_tolerance_minutes

    def to_dict(self) -> dict:
        d = asdict(self)
        d["bands"] = [b.to_dict() for b in self.bands]
        d["phase_band"] = self.phase_band.to_dict()
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "RunConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(d) - known
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        return cls(**d)

    @classmethod
    def from_json(cls, path) -> "RunConfig":
        """Load a config file; a run manifest (with a ``config`` key) also works."""
        data = json.loads(Path(path).read_text())
        if "config" in data and isinstance(data["config"], dict):
            data = data["config"]
        return cls.from_dict(data)
