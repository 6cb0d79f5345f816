"""Command-line entry point for phase-locking analysis.

Exit codes: 0 success, 1 usage error, 2 data error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from .config import RunConfig
from .exceptions import CyclePhaseError, DataError
from .filtering import BandSpec
from .io import write_events_csv, write_series_csv, write_table
from .report import (dump_json, analytic_rows, compute_psd, load_events, load_ibi, load_sleep, phase_rows, psd_rows,
                     rose_rows, run_baseline, run_report, scan_config)
from .scan import band_analytic, band_scan, scan_band
from .synth import SynthConfig, gen_dataset

log = logging.getLogger("cyclephase")

PREDICTOR_ALIASES = {"clock": "clock_time", "phase": "circadian_phase", "sleep": "sleep_score"}

# flag dest -> RunConfig field
FLAG_FIELDS = {
    "ibi": "ibi_path",
    "events": "events_path",
    "sleep": "sleep_path",
    "tz_offset": "timezone_offset_minutes",
    "step_minutes": "step_minutes",
    "ibi_max_gap_hours": "ibi_max_gap_hours",
    "sleep_max_gap_days": "sleep_max_gap_days",
    "band": "bands",
    "phase_band": "phase_band",
    "welch_segment_days": "welch_segment_days",
    "welch_overlap": "welch_overlap",
    "welch_detrend": "welch_detrend",
    "order": "filter_order",
    "tolerance_minutes": "mapping_tolerance_minutes",
    "rose_bins": "rose_bins",
    "ridge": "ridge",
    "mc_draws": "mc_draws",
    "seed": "seed",
    "out": "output_dir",
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _band(text):
    try:
        return BandSpec.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _add_run_flags(p):
    p.add_argument("--config", help="JSON config (or run_manifest.json); its values override flags")
    p.add_argument("--ibi", help="IBI CSV (timestamp,value)")
    p.add_argument("--events", help="event CSV (onset_timestamp)")
    p.add_argument("--sleep", help="nightly sleep score CSV (timestamp,value)")
    p.add_argument("--tz-offset", type=int, help="fixed local UTC offset in minutes")
    p.add_argument("--step-minutes", type=int)
    p.add_argument("--ibi-max-gap-hours", type=int)
    p.add_argument("--sleep-max-gap-days", type=int)
    p.add_argument("--band", type=_band, action="append", help="period band lo:hi in days (repeatable)")
    p.add_argument("--phase-band", type=_band, help="band used for phase maps and the phase baseline")
    p.add_argument("--welch-segment-days", type=float)
    p.add_argument("--welch-overlap", type=float)
    p.add_argument("--welch-detrend", choices=["constant", "linear", "none"])
    p.add_argument("--order", type=int, help="Butterworth prototype order (1-4)")
    p.add_argument("--tolerance-minutes", type=float, help="max event-to-sample distance")
    p.add_argument("--rose-bins", type=int)
    p.add_argument("--ridge", type=float)
    p.add_argument("--mc-draws", type=int, help="Monte Carlo Rayleigh draws (0 = off)")
    p.add_argument("--seed", type=int)
    p.add_argument("--out", help="output directory")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="cyclephase", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    for name, help_ in [("psd", "Welch spectrum of the IBI signal"),
                        ("bandscan", "phase-locking statistics across bands"),
                        ("report", "full analysis with every report file")]:
        _add_run_flags(sub.add_parser(name, help=help_))

    p = sub.add_parser("phasemap", help="event phases for one band")
    _add_run_flags(p)
    p.add_argument("--dump-phase", action="store_true", help="also write the per-sample phase series")

    p = sub.add_parser("baseline", help="single-predictor logistic baseline")
    _add_run_flags(p)
    p.add_argument("--predictor", choices=sorted(PREDICTOR_ALIASES), required=True)

    p = sub.add_parser("synth", help="write a synthetic dataset")
    p.add_argument("--config", help="SynthConfig JSON")
    p.add_argument("--out", default="synthetic", help="output directory")
    return parser


def resolve_config(args) -> RunConfig:
    values = {}
    for dest, fld in FLAG_FIELDS.items():
        v = getattr(args, dest, None)
        if v is not None:
            values[fld] = v
    if args.config:
        path = Path(args.config)
        if not path.is_file():
            raise DataError(f"config file not found: {path}")
        data = json.loads(path.read_text())
        if isinstance(data.get("config"), dict):
            data = data["config"]
        values.update(data)
    try:
        return RunConfig.from_dict(values)
    except (TypeError, ValueError) as exc:
        raise UsageError(str(exc)) from None


def _cmd_psd(cfg):
    out = Path(cfg.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    psd = compute_psd(load_ibi(cfg), cfg)
    write_table(out / "psd.csv", ["period_days", "frequency_cpd", "power"], psd_rows(psd))
    dump_json(out / "psd_params.json", {**psd.params.to_dict(), "n_segments": psd.n_segments})


def _cmd_bandscan(cfg):
    out = Path(cfg.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    events = load_events(cfg)
    results = band_scan(load_ibi(cfg), events, cfg.bands, scan_config(cfg))
    dump_json(out / "bandscan.json", {"n_events": len(events), "tolerance_seconds": cfg.tolerance_seconds,
                                  "fdr_family": "all bands with a Rayleigh p-value",
                                  "bands": [r.to_dict() for r in results]})
    for r in results:
        write_table(out / f"phases_{r.band.slug}.csv",
                    ["event_timestamp", "phase_rad", "amplitude", "sample_offset_s", "edge_flag"], phase_rows(r))
        write_table(out / f"rose_{r.band.slug}.csv", ["bin", "lower_rad", "upper_rad", "count"],
                    rose_rows(r, cfg.rose_bins))
    for r in results:
        print(f"{r.band.label:>22}  n={r.n:3d}  R={_fmt(r.resultant_length)}  p={_fmt(r.rayleigh_p)}"
              f"  p_fdr={_fmt(r.fdr_adjusted_p)}")


def _fmt(v):
    return "   -  " if v is None else f"{v:.4g}"


def _cmd_phasemap(cfg, dump_phase):
    out = Path(cfg.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    r = scan_band(load_ibi(cfg), load_events(cfg), cfg.phase_band, scan_config(cfg))
    write_table(out / f"phases_{r.band.slug}.csv",
                ["event_timestamp", "phase_rad", "amplitude", "sample_offset_s", "edge_flag"], phase_rows(r))
    if dump_phase:
        write_table(out / f"phase_series_{r.band.slug}.csv", ["timestamp", "phase_rad", "amplitude", "edge_flag"],
                    analytic_rows(r.analytic))
    print(f"{r.n} mapped, {r.n_excluded} excluded, {r.n_edge_flagged} on edge samples")


def _cmd_baseline(cfg, predictor):
    kind = PREDICTOR_ALIASES[predictor]
    ibi = load_ibi(cfg)
    sleep = load_sleep(cfg) if kind == "sleep_score" else None
    if kind == "sleep_score" and sleep is None:
        raise UsageError("--predictor sleep needs --sleep")
    analytic = band_analytic(ibi, cfg.phase_band, cfg.filter_order) if kind == "circadian_phase" else []
    res = run_baseline(kind, ibi, analytic, sleep, load_events(cfg), cfg)
    payload = {k: res[k] for k in ("coefficients", "auc", "n_rows", "n_positive", "converged")}
    out = Path(cfg.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    dump_json(out / f"baseline_{kind}.json", payload)
    print(json.dumps(payload, sort_keys=True))


def _cmd_synth(args):
    cfg = SynthConfig()
    if args.config:
        path = Path(args.config)
        if not path.is_file():
            raise DataError(f"config file not found: {path}")
        try:
            cfg = SynthConfig.from_dict(json.loads(path.read_text()))
        except (TypeError, ValueError) as exc:
            raise UsageError(str(exc)) from None
    ds = gen_dataset(cfg)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    write_series_csv(out / "ibi.csv", ds.series)
    write_events_csv(out / "events.csv", ds.events)
    write_series_csv(out / "sleep.csv", ds.sleep)
    (out / "synth_config.json").write_text(json.dumps(cfg.to_dict(), indent=2, sort_keys=True) + "\n")


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        if args.command == "synth":
            _cmd_synth(args)
            return 0
        cfg = resolve_config(args)
        if args.command == "psd":
            _cmd_psd(cfg)
        elif args.command == "bandscan":
            _cmd_bandscan(cfg)
        elif args.command == "phasemap":
            _cmd_phasemap(cfg, args.dump_phase)
        elif args.command == "baseline":
            _cmd_baseline(cfg, args.predictor)
        elif args.command == "report":
            for name, path in run_report(cfg).items():
                print(f"{name}: {path}")
    except UsageError as exc:
        print(f"cyclephase: usage error: {exc}", file=sys.stderr)
        return 1
    except CyclePhaseError as exc:
        print(f"cyclephase: {exc}", file=sys.stderr)
        return exc.exit_code
    except FileNotFoundError as exc:
        print(f"cyclephase: file not found: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
