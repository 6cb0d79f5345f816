import numpy as np
import pytest

from cyclephase.exceptions import DataError
from cyclephase.io import read_events_csv, read_series_csv, write_events_csv, write_series_csv, write_table
from cyclephase.synth import SynthConfig, gen_dataset


def put(tmp_path, text, name="x.csv"):
    p = tmp_path / name
    p.write_text(text)
    return p


def test_epoch_series(tmp_path):
    s = read_series_csv(put(tmp_path, "timestamp,ibi_ms\n100,800\n160.5,812.25\n"))
    np.testing.assert_array_equal(s.timestamps, [100.0, 160.5])
    np.testing.assert_array_equal(s.values, [800.0, 812.25])


def test_iso_series_and_offsets(tmp_path):
    s = read_series_csv(put(tmp_path, "t,v\n2024-01-01T00:00:00Z,1\n2024-01-01T02:00:00+01:00,2\n2024-01-01T01:30:00,3\n"))
    np.testing.assert_array_equal(s.timestamps, [1704067200.0, 1704067200.0 + 3600, 1704067200.0 + 5400])


def test_mixed_formats(tmp_path):
    with pytest.raises(DataError, match=r"x\.csv:3: .*mixed"):
        read_series_csv(put(tmp_path, "t,v\n2024-01-01T00:00:00Z,1\n1704070800,2\n"))


def test_empty_value_reports_line(tmp_path):
    with pytest.raises(DataError, match=r"x\.csv:3: empty value"):
        read_series_csv(put(tmp_path, "t,v\n1,2\n2,\n"))


@pytest.mark.parametrize("text,msg", [
    ("", "header row required"),
    ("1,2\n3,4\n", "header"),
    ("t,v\n", "no samples"),
    ("t,v\n1,2,3\n", "field"),
    ("t,v\n2,1\n1,1\n", "strictly increasing"),
    ("t,v\n1,abc\n", "bad value"),
    ("t,v\n1,inf\n", "non-finite"),
    ("t,v\nyesterday,1\n", "bad timestamp"),
])
def test_malformed(tmp_path, text, msg):
    with pytest.raises(DataError, match=msg):
        read_series_csv(put(tmp_path, text))


def test_missing_file(tmp_path):
    with pytest.raises(FileNotFoundError):
        read_series_csv(tmp_path / "absent.csv")


def test_blank_lines_skipped(tmp_path):
    s = read_series_csv(put(tmp_path, "t,v\n1,2\n\n3,4\n"))
    assert len(s.timestamps) == 2


def test_events(tmp_path):
    ev = read_events_csv(put(tmp_path, "onset_timestamp\n10\n20\n"))
    np.testing.assert_array_equal(ev.onsets, [10.0, 20.0])
    with pytest.raises(DataError):
        read_events_csv(put(tmp_path, "onset,extra\n10,1\n", "y.csv"))


def test_round_trip_synth(tmp_path):
    ds = gen_dataset(SynthConfig(duration_days=20, event_count=5, missing_spec=((5.0, 1),), seed=4))
    write_series_csv(tmp_path / "ibi.csv", ds.series)
    write_events_csv(tmp_path / "ev.csv", ds.events)
    s = read_series_csv(tmp_path / "ibi.csv")
    present = ~np.isnan(ds.series.values)
    np.testing.assert_array_equal(s.timestamps, ds.series.times[present])
    np.testing.assert_array_equal(s.values, ds.series.values[present])
    np.testing.assert_array_equal(read_events_csv(tmp_path / "ev.csv").onsets, ds.events.onsets)


def test_write_table(tmp_path):
    write_table(tmp_path / "t.csv", ["a", "b"], [[1, 2.5], [3, 4]])
    assert (tmp_path / "t.csv").read_text() == "a,b\n1,2.5\n3,4\n"
