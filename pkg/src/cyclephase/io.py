"""CSV ingestion and emission.

Input tables need a header row. Timestamps are either epoch seconds or
ISO-8601; the format is detected from the first data row and must then hold
for the whole file. Naive ISO timestamps are read as UTC.
"""

from __future__ import annotations

import csv
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from .events import EventSet
from .exceptions import DataError
from .timeseries import IrregularSeries, RegularSeries


def _parse_iso(text: str) -> float:
    s = text.strip()
    if s.endswith("Z"):
        s = s[:-1] + "+00:00"
    dt = datetime.fromisoformat(s)
    if dt.tzinfo is None:
        dt = dt.replace(tzinfo=timezone.utc)
    return dt.timestamp()


def _is_number(text: str) -> bool:
    try:
        float(text)
    except ValueError:
        return False
    return True


def _read_rows(path, n_cols: int):
    path = Path(path)
    if not path.is_file():
        raise FileNotFoundError(str(path))
    with path.open(newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows:
        raise DataError(f"{path}: empty file (header row required)")
    header = [h.strip() for h in rows[0]]
    if len(header) != n_cols or any(_is_number(h) for h in header if h):
        raise DataError(f"{path}:1: expected a header row with {n_cols} column(s), got {rows[0]!r}")
    body = []
    for lineno, row in enumerate(rows[1:], start=2):
        if not row or all(not c.strip() for c in row):
            continue
        if len(row) != n_cols:
            raise DataError(f"{path}:{lineno}: expected {n_cols} field(s), got {len(row)}")
        body.append((lineno, [c.strip() for c in row]))
    return path, body


def _parse_times(path, body):
    if not body:
        return np.empty(0)
    epoch = _is_number(body[0][1][0])
    out = np.empty(len(body))
    for i, (lineno, row) in enumerate(body):
        text = row[0]
        try:
            if epoch:
                out[i] = float(text)
            else:
                if _is_number(text):
                    raise ValueError("mixed timestamp formats")
                out[i] = _parse_iso(text)
        except ValueError as exc:
            raise DataError(f"{path}:{lineno}: bad timestamp {text!r} ({exc})") from None
        if i and out[i] <= out[i - 1]:
            raise DataError(f"{path}:{lineno}: timestamps must be strictly increasing")
    return out


def read_series_csv(path, unit: str = "") -> IrregularSeries:
    """Read a ``timestamp,value`` table. Empty values are rejected."""
    path, body = _read_rows(path, 2)
    if not body:
        raise DataError(f"{path}: no samples")
    times = _parse_times(path, body)
    values = np.empty(len(body))
    for i, (lineno, row) in enumerate(body):
        if row[1] == "":
            raise DataError(f"{path}:{lineno}: empty value (omit the row instead)")
        try:
            values[i] = float(row[1])
        except ValueError:
            raise DataError(f"{path}:{lineno}: bad value {row[1]!r}") from None
        if not np.isfinite(values[i]):
            raise DataError(f"{path}:{lineno}: non-finite value")
    return IrregularSeries(times, values, unit)


def read_events_csv(path, label: str = "events") -> EventSet:
    """Read a single-column ``onset_timestamp`` table."""
    path, body = _read_rows(path, 1)
    return EventSet(_parse_times(path, body), label)


def format_time(t: float) -> str:
    return repr(float(t))


def write_series_csv(path, series: RegularSeries) -> None:
    """Write present samples as ``timestamp,value`` (missing rows omitted)."""
    with Path(path).open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["timestamp", "value"])
        for t, v in zip(series.times, series.values):
            if not np.isnan(v):
                w.writerow([format_time(t), repr(float(v))])


def write_events_csv(path, events: EventSet) -> None:
    with Path(path).open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["onset_timestamp"])
        for t in events.onsets:
            w.writerow([format_time(t)])


def write_table(path, header, rows) -> None:
    with Path(path).open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)
