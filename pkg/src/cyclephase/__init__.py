"""Phase locking of discrete events to rhythms in irregular wearable time series."""

__version__ = "0.1.0"

from .analytic import AnalyticSeries, HilbertPhase, hilbert_analytic
from .baselines import IRLSLogisticRegression, auc, build_design, fit_logistic
from .circstats import (bh_fdr, circular_mean, rayleigh_test, rayleigh_test_montecarlo, resultant_length,
                        rose_histogram)
from .events import EventSet, PhaseSample, map_events_to_phase
from .exceptions import CyclePhaseError, DataError, NumericalError
from .filtering import DEFAULT_BANDS, BandSpec, ButterworthBandpass, design_bandpass, eligible_segments, filtfilt
from .io import read_events_csv, read_series_csv, write_events_csv, write_series_csv
from .plotting import emit_rose_svg
from .scan import BandResult, PhaseLockingScan, band_scan
from .spectral import PsdEstimate, WelchParams, dominant_period, welch_psd
from .synth import SynthConfig, SynthDataset, gen_dataset
from .timeseries import (IrregularSeries, RegularSeries, Segment, contiguous_segments, interpolate_gaps,
                         resample_to_grid, shift_daily, zscore)

__all__ = [
    "AnalyticSeries", "BandResult", "BandSpec", "ButterworthBandpass", "CyclePhaseError", "DEFAULT_BANDS",
    "DataError", "EventSet", "HilbertPhase", "IRLSLogisticRegression", "IrregularSeries", "NumericalError",
    "PhaseLockingScan", "PhaseSample", "PsdEstimate", "RegularSeries", "Segment", "SynthConfig", "SynthDataset",
    "WelchParams", "auc", "band_scan", "bh_fdr", "build_design", "circular_mean", "contiguous_segments",
    "design_bandpass", "dominant_period", "eligible_segments", "emit_rose_svg", "filtfilt", "fit_logistic",
    "gen_dataset", "hilbert_analytic", "interpolate_gaps", "map_events_to_phase", "rayleigh_test",
    "rayleigh_test_montecarlo", "read_events_csv", "read_series_csv", "resample_to_grid", "resultant_length",
    "rose_histogram", "shift_daily", "welch_psd", "write_events_csv", "write_series_csv", "zscore",
]
