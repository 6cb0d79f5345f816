import numpy as np
import pytest
from scipy import signal

from cyclephase.analytic import HilbertPhase, analytic_signal, hilbert_analytic
from cyclephase.exceptions import DataError
from cyclephase.filtering import BandSpec

H = 3600.0
CIRC = BandSpec(0.8, 1.2)


def cosine(days=30, period=1.0):
    n = int(days * 24)
    return np.cos(2 * np.pi * np.arange(n) / (24 * period))


def interior(n, frac=0.05):
    k = int(np.ceil(frac * n))
    return slice(k, n - k)


@pytest.mark.parametrize("n", [720, 721])
def test_matches_scipy_hilbert(n):
    x = np.random.default_rng(n).normal(size=n)
    np.testing.assert_allclose(analytic_signal(x), signal.hilbert(x), atol=1e-12)


def test_real_part_is_input():
    x = np.random.default_rng(0).normal(size=999)
    z = analytic_signal(x)
    np.testing.assert_allclose(z.real, x, rtol=1e-12, atol=1e-12 * np.abs(x).max())


def test_phase_rate_of_cosine():
    x = cosine()
    a = hilbert_analytic(x, 0.0, H, CIRC)
    rate = np.diff(np.unwrap(a.phase))[interior(x.size - 1)]
    assert np.max(np.abs(rate - 2 * np.pi / 24)) < 1e-3


def test_phase_of_cosine_matches_ground_truth():
    x = cosine()
    a = hilbert_analytic(x, 0.0, H, CIRC)
    truth = np.angle(np.exp(2j * np.pi * np.arange(x.size) / 24))
    err = np.angle(np.exp(1j * (a.phase - truth)))[interior(x.size)]
    assert np.max(np.abs(err)) < 1e-3


def test_amplitude_of_cosine():
    a = hilbert_analytic(cosine(), 0.0, H, CIRC)
    amp = a.amplitude[interior(a.amplitude.size)]
    assert np.max(np.abs(amp - 1)) < 0.01
    assert amp.std() / amp.mean() < 0.02


def test_zero_input():
    a = hilbert_analytic(np.zeros(50), 0.0, H, CIRC)
    assert np.all(a.amplitude == 0)
    assert np.all(a.phase == 0)
    assert a.low_confidence.all()


def test_empty():
    with pytest.raises(DataError):
        hilbert_analytic([], 0.0, H, CIRC)


def test_ranges_and_grid():
    x = np.random.default_rng(1).normal(size=300)
    a = hilbert_analytic(x, 1000.0, H, CIRC)
    assert np.all((a.phase >= -np.pi) & (a.phase <= np.pi))
    assert np.all(a.amplitude >= 0)
    assert len(a) == 300 and a.times[1] - a.times[0] == H and a.times[0] == 1000.0


def test_phase_continuity_for_band_limited_input():
    x = cosine(period=0.5)  # 12 samples per cycle
    a = hilbert_analytic(x, 0.0, H, CIRC)
    d = np.angle(np.exp(1j * np.diff(a.phase)))
    assert np.all(np.abs(d) < np.pi)


def test_edge_flags_cover_half_slowest_period():
    a = hilbert_analytic(cosine(), 0.0, H, CIRC)
    k = int(np.ceil(0.6 * 24))
    assert a.edge[:k].all() and a.edge[-k:].all()
    assert not a.edge[k:-k].any()


def test_transformer():
    x = cosine()
    np.testing.assert_allclose(HilbertPhase().fit().transform(x), hilbert_analytic(x, 0, H, CIRC).phase)
    both = HilbertPhase(output="both").fit().transform(x)
    assert both.shape == (x.size, 2)
    with pytest.raises(ValueError):
        HilbertPhase(output="nope").fit()
