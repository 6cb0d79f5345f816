import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import signal
from sklearn.base import clone

from cyclephase.exceptions import DataError
from cyclephase.filtering import (DEFAULT_BANDS, BandSpec, ButterworthBandpass, design_bandpass, eligible_segments,
                                  filtfilt, freq_response)
from cyclephase.timeseries import RegularSeries, contiguous_segments

H = 3600.0
CIRC = DEFAULT_BANDS[0]


def tf_mag(coeffs, f_cpd):
    """|H| from the expanded polynomials, independent of the SOS cascade."""
    z = np.exp(2j * np.pi * np.asarray(f_cpd) / 86400 * coeffs.sample_step)
    zinv = 1 / z
    num = sum(b * zinv ** k for k, b in enumerate(coeffs.numerator))
    den = sum(a * zinv ** k for k, a in enumerate(coeffs.denominator))
    return np.abs(num / den)


def hourly(days):
    return np.arange(int(days * 24)) / 24.0


class TestBandSpec:
    def test_invalid(self):
        with pytest.raises(ValueError):
            BandSpec(1.2, 0.8)
        with pytest.raises(ValueError):
            BandSpec(0, 1)

    def test_parse(self):
        b = BandSpec.parse("14:28")
        assert (b.low_period, b.high_period) == (14, 28)
        with pytest.raises(ValueError):
            BandSpec.parse("14-28")

    def test_default_band_list(self):
        assert [(b.low_period, b.high_period) for b in DEFAULT_BANDS] == [
            (0.8, 1.2), (2, 5), (3, 7), (5, 9), (7, 14), (10, 20), (14, 28)]


class TestDesign:
    @pytest.mark.parametrize("band", DEFAULT_BANDS, ids=lambda b: b.label)
    def test_stable_and_minus_3db_edges(self, band):
        c = design_bandpass(band, H, 2)
        assert c.denominator[0] == 1.0
        assert np.all(np.abs(np.roots(c.denominator)) < 1)
        assert np.all(np.abs(c.poles) < 1)
        edges = [1 / band.high_period, 1 / band.low_period]
        np.testing.assert_allclose(tf_mag(c, edges), 2 ** -0.5, rtol=0.005)
        np.testing.assert_allclose(np.abs(freq_response(c, edges)), 2 ** -0.5, rtol=0.005)

    def test_center_gain(self):
        c = design_bandpass(CIRC, H, 2)
        assert tf_mag(c, [np.sqrt(1 / 0.8 / 1.2)])[0] >= 0.99

    @pytest.mark.parametrize("order", [1, 2, 3, 4])
    @pytest.mark.parametrize("band", [CIRC, DEFAULT_BANDS[-1]], ids=["circ", "14-28"])
    def test_matches_scipy_butter(self, band, order):
        c = design_bandpass(band, H, order)
        sos = signal.butter(order, [1 / band.high_period, 1 / band.low_period], "bandpass", fs=24.0, output="sos")
        f = np.linspace(0.001, 11.9, 400)
        _, ref = signal.sosfreqz(sos, f, fs=24.0)
        np.testing.assert_allclose(np.abs(freq_response(c, f)), np.abs(ref), atol=1e-9)

    def test_extreme_band_pole_radius(self):
        c = design_bandpass(BandSpec(14, 28), H, 2)
        r = np.abs(np.roots(c.denominator))
        assert r.max() < 1 and r.max() > 0.99

    def test_nyquist(self):
        with pytest.raises(DataError):
            design_bandpass(BandSpec(0.05, 0.5), H, 2)

    def test_order_range(self):
        with pytest.raises(ValueError):
            design_bandpass(CIRC, H, 5)

    @pytest.mark.parametrize("band", DEFAULT_BANDS, ids=lambda b: b.label)
    def test_monotone_away_from_center(self, band):
        c = design_bandpass(band, H, 2)
        f0 = np.sqrt(1 / band.low_period / band.high_period)
        up = np.abs(freq_response(c, np.linspace(f0, 11.99, 2000)))
        down = np.abs(freq_response(c, np.linspace(f0, 1e-4, 2000)))
        assert np.all(np.diff(up) <= 1e-12)
        assert np.all(np.diff(down) <= 1e-12)


class TestFiltfilt:
    c = design_bandpass(CIRC, H, 2)

    def test_zero(self):
        assert np.all(filtfilt(self.c, np.zeros(200)) == 0)

    def test_too_short(self):
        with pytest.raises(DataError, match="too short"):
            filtfilt(self.c, np.ones(15))

    def test_length_preserved(self):
        assert filtfilt(self.c, np.random.default_rng(0).normal(size=100)).size == 100

    def test_matches_scipy_sosfiltfilt(self):
        x = np.random.default_rng(1).normal(size=3000)
        ref = signal.sosfiltfilt(self.c.sos, x, padtype="odd", padlen=12)
        np.testing.assert_allclose(filtfilt(self.c, x), ref, rtol=1e-12, atol=1e-12)

    def test_in_band_sinusoid_amplitude_and_zero_lag(self):
        t = hourly(60)
        x = np.cos(2 * np.pi * t)
        y = filtfilt(self.c, x)
        # IIR start-up transients (pole radius ~0.97) reach a few days in
        inner = slice(len(t) // 5, -len(t) // 5)
        assert np.max(np.abs(y[inner])) == pytest.approx(1.0, rel=0.02)
        lags = np.arange(-12, 13)
        xc = [np.dot(x[inner], np.roll(y, -k)[inner]) for k in lags]
        assert lags[int(np.argmax(xc))] == 0

    def test_out_of_band_trend(self):
        t = hourly(200)
        y = filtfilt(self.c, np.cos(2 * np.pi * t / 50))
        inner = slice(len(t) // 10, -len(t) // 10)
        assert np.max(np.abs(y[inner])) < 0.05

    @pytest.mark.parametrize("band", [CIRC, BandSpec(5, 9)], ids=["circ", "5-9"])
    def test_cascade_is_squared_magnitude(self, band):
        c = design_bandpass(band, H, 2)
        f0 = np.sqrt(1 / band.low_period / band.high_period)
        probes = f0 * np.array([0.6, 0.85, 1.0, 1.15, 1.5])
        t = hourly(400)
        inner = slice(len(t) // 4, -len(t) // 4)
        for f in probes:
            y = filtfilt(c, np.cos(2 * np.pi * f * t))
            # least-squares amplitude of the output at the probe frequency
            basis = np.column_stack([np.cos(2 * np.pi * f * t[inner]), np.sin(2 * np.pi * f * t[inner])])
            coef, *_ = np.linalg.lstsq(basis, y[inner], rcond=None)
            gain = np.hypot(*coef)
            assert gain == pytest.approx(tf_mag(c, [f])[0] ** 2, rel=0.01)
            assert abs(coef[1]) < 1e-3 * max(gain, 1e-3)  # no phase shift

    @pytest.mark.parametrize("band,edge", [(CIRC, 800), (DEFAULT_BANDS[-1], 9000)], ids=["circ", "14-28"])
    def test_time_reversal_symmetry_away_from_edges(self, band, edge):
        c = design_bandpass(band, H, 2)
        x = np.random.default_rng(3).normal(size=20000)
        y = filtfilt(c, x)
        yr = filtfilt(c, x[::-1])[::-1]
        inner = slice(edge, -edge)
        assert np.max(np.abs(y[inner] - yr[inner])) <= 1e-9 * np.max(np.abs(y))

    @settings(max_examples=30, deadline=None)
    @given(st.floats(-1e3, 1e3).filter(lambda a: abs(a) > 1e-3), st.integers(0, 2**31))
    def test_linear_in_scale(self, a, seed):
        x = np.random.default_rng(seed).normal(size=300)
        np.testing.assert_allclose(filtfilt(self.c, a * x), a * filtfilt(self.c, x), rtol=1e-9, atol=1e-9 * abs(a))


class TestEligibleSegments:
    def series(self, mask):
        return RegularSeries(0.0, H, np.where(mask, 0.0, np.nan))

    def test_full_176_days_kept_for_circadian(self):
        segs = contiguous_segments(self.series(np.ones(176 * 24, bool)))
        assert len(eligible_segments(segs, CIRC)) == 1

    def test_80_days_excluded_for_14_28(self):
        segs = contiguous_segments(self.series(np.ones(80 * 24, bool)))
        assert eligible_segments(segs, BandSpec(14, 28)) == []

    def test_exactly_three_cycles_kept(self):
        segs = contiguous_segments(self.series(np.ones(84 * 24, bool)))
        assert len(eligible_segments(segs, BandSpec(14, 28))) == 1

    def test_empty(self):
        assert eligible_segments([], CIRC) == []

    def test_order_preserved(self):
        mask = np.ones(300 * 24, bool)
        mask[[10 * 24, 100 * 24, 200 * 24]] = False
        kept = eligible_segments(contiguous_segments(self.series(mask)), BandSpec(10, 20))
        starts = [s.start_index for s in kept]
        # the leading 10-day segment is too short for 3 x 20 days
        assert starts == [241, 2401, 4801]


class TestTransformer:
    def test_params_and_clone(self):
        est = ButterworthBandpass(low_period=2, high_period=5, order=3)
        assert est.get_params()["order"] == 3
        assert clone(est).get_params() == est.get_params()

    def test_matches_function(self):
        x = np.random.default_rng(4).normal(size=500) + 5
        est = ButterworthBandpass().fit()
        c = design_bandpass(CIRC, H, 2)
        np.testing.assert_allclose(est.transform(x), filtfilt(c, x - x.mean()))
        cols = est.transform(np.column_stack([x, 2 * x]))
        np.testing.assert_allclose(cols[:, 1], 2 * cols[:, 0])

    def test_not_fitted(self):
        from sklearn.exceptions import NotFittedError

        with pytest.raises(NotFittedError):
            ButterworthBandpass().transform(np.ones(100))
