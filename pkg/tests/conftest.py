import numpy as np
import pytest

from cyclephase.synth import SynthConfig, gen_dataset
from cyclephase.timeseries import interpolate_gaps, zscore

_CRITERIA = []


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for name, ok, detail in _CRITERIA:
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] {name}: {detail}")


@pytest.fixture
def criterion():
    """Record one acceptance line; the summary prints them after the run."""

    def record(name, ok, detail=""):
        _CRITERIA.append((name, bool(ok), detail))
        return ok

    return record


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture(scope="session")
def locked_dataset():
    cfg = SynthConfig(vonmises_kappa=8.0, vonmises_mu=1.0, seed=3, missing_spec=((40.3, 4), (95.7, 6)))
    ds = gen_dataset(cfg)
    return ds, zscore(interpolate_gaps(ds.series, 6))
