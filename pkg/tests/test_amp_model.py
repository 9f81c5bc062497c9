"""Tests for the cubic amplifier fit, amplification, and harmonics."""

import math

import numpy as np
import pytest

from palink.amp_model import (
    HarmonicAmps,
    PaParams,
    am_am_curve,
    amplify_complex,
    amplify_real,
    compression_input_voltage,
    derive_coeffs,
    harmonic_analysis,
)

DATASHEET = PaParams(gain_db=23.0, p1db_db=27.0, psat_db=29.5)


@pytest.fixture(scope="module")
def coeffs():
    return derive_coeffs(DATASHEET)


class TestParams:
    def test_rejects_non_finite(self):
        with pytest.raises(ValueError):
            PaParams(math.nan, 27.0, 29.5)
        with pytest.raises(ValueError):
            PaParams(23.0, math.inf, 29.5)

    def test_rejects_psat_below_p1db(self):
        with pytest.raises(ValueError):
            PaParams(23.0, 27.0, 26.0)


class TestDeriveCoeffs:
    def test_datasheet_a1(self, coeffs):
        # 10^(23/20) evaluated independently
        assert coeffs.a1 == pytest.approx(14.125375446227544, abs=1e-9)

    def test_zero_gain_gives_unity_a1(self):
        c = derive_coeffs(PaParams(0.0, 5.0, 8.0))
        assert c.a1 == 1.0

    def test_datasheet_chain(self, coeffs):
        x1 = compression_input_voltage(DATASHEET)
        y1 = 10.0 ** (27.0 / 20.0)
        assert x1 == pytest.approx(1.7782794100389228, abs=1e-9)
        assert y1 == pytest.approx(22.38721138568339, abs=1e-9)
        # a3 = (22.3872 - 25.1189) / 1.77828^3
        assert coeffs.a3 == pytest.approx(-0.4857642159746568, abs=1e-9)

    def test_datasheet_saturation(self, coeffs):
        assert coeffs.x_sat == pytest.approx(math.sqrt(-coeffs.a1 / (3 * coeffs.a3)))
        assert coeffs.x_sat == pytest.approx(3.1133, abs=1e-3)
        assert 20.0 * math.log10(coeffs.y_sat) == pytest.approx(29.34, abs=5e-3)
        # model saturation should sit near the datasheet Psat
        assert abs(20.0 * math.log10(coeffs.y_sat) - DATASHEET.psat_db) < 0.5

    def test_compression_always_negative_a3(self):
        rng = np.random.default_rng(7)
        for _ in range(200):
            gain = rng.uniform(-10.0, 40.0)
            p1db = rng.uniform(-20.0, 40.0)
            c = derive_coeffs(PaParams(gain, p1db, p1db + rng.uniform(0.5, 5.0)))
            assert c.a1 > 0
            assert c.a3 < 0


class TestAmplifyReal:
    def test_zero_maps_to_zero(self, coeffs):
        assert amplify_real(0.0, coeffs) == 0.0

    def test_one_db_point(self, coeffs):
        x1 = compression_input_voltage(DATASHEET)
        out = amplify_real(x1, coeffs)
        assert out == pytest.approx(22.3872, abs=1e-3)
        assert 20.0 * math.log10(out) == pytest.approx(27.0, abs=1e-9)
        # exactly 1 dB below the linear extrapolation
        assert 20.0 * math.log10(coeffs.a1 * x1) - 20.0 * math.log10(out) == pytest.approx(
            1.0, abs=1e-9
        )

    def test_clamps_beyond_x_sat(self, coeffs):
        assert amplify_real(10.0, coeffs) == pytest.approx(coeffs.y_sat)
        assert amplify_real(10.0, coeffs) == pytest.approx(29.32, abs=5e-3)
        # clamp off returns the raw (decreasing) cubic
        raw = coeffs.a1 * 10.0 + coeffs.a3 * 1000.0
        assert amplify_real(10.0, coeffs, clamp=False) == pytest.approx(raw)

    def test_odd_symmetry(self, coeffs):
        v = np.random.default_rng(3).uniform(-8.0, 8.0, size=500)
        for clamp in (True, False):
            np.testing.assert_array_equal(
                amplify_real(-v, coeffs, clamp), -np.asarray(amplify_real(v, coeffs, clamp))
            )

    def test_small_signal_gain(self, coeffs):
        v = 1e-6 * coeffs.x_sat
        assert abs(amplify_real(v, coeffs) / v - coeffs.a1) / coeffs.a1 < 1e-8

    def test_monotone_with_clamp(self, coeffs):
        v = np.linspace(0.0, 3.0 * coeffs.x_sat, 4000)
        y = amplify_real(v, coeffs)
        assert np.all(np.diff(y) >= -1e-12)

    def test_rejects_non_finite(self, coeffs):
        with pytest.raises(ValueError):
            amplify_real(math.nan, coeffs)

    def test_one_db_round_trip_random_params(self):
        rng = np.random.default_rng(11)
        for _ in range(200):
            params = PaParams(
                rng.uniform(-10.0, 40.0),
                p1db := rng.uniform(-20.0, 40.0),
                p1db + rng.uniform(0.5, 5.0),
            )
            c = derive_coeffs(params)
            x1 = compression_input_voltage(params)
            assert 20.0 * math.log10(amplify_real(x1, c)) == pytest.approx(
                params.p1db_db, abs=1e-9
            )


class TestAmplifyComplex:
    def test_zero(self, coeffs):
        assert amplify_complex(0j, coeffs) == 0j

    def test_per_component_at_one_db_point(self, coeffs):
        x1 = compression_input_voltage(DATASHEET)
        out = amplify_complex(x1 + 1j * x1, coeffs)
        assert out.real == pytest.approx(22.3872, abs=1e-3)
        assert out.imag == pytest.approx(22.3872, abs=1e-3)

    def test_small_signal_is_linear(self, coeffs):
        s = 1e-6 * (0.3 + 0.7j)
        out = amplify_complex(s, coeffs)
        assert abs(out - coeffs.a1 * s) / abs(coeffs.a1 * s) < 1e-10

    def test_matches_amplify_real_per_rail(self, coeffs):
        rng = np.random.default_rng(5)
        s = rng.uniform(-4, 4, 64) + 1j * rng.uniform(-4, 4, 64)
        out = amplify_complex(s, coeffs)
        np.testing.assert_array_equal(out.real, amplify_real(s.real, coeffs))
        np.testing.assert_array_equal(out.imag, amplify_real(s.imag, coeffs))


class TestAmAmCurve:
    def test_small_signal_gain(self, coeffs):
        rows = am_am_curve(coeffs, -40.0, 15.0, 111)
        assert rows[0][2] == pytest.approx(23.0, abs=1e-3)

    def test_one_db_point_row(self, coeffs):
        pin1 = 20.0 * math.log10(compression_input_voltage(DATASHEET))
        rows = am_am_curve(coeffs, pin1 - 1.0, pin1, 2)
        assert rows[-1][1] == pytest.approx(27.0, abs=1e-9)
        assert rows[-1][2] == pytest.approx(22.0, abs=1e-9)

    def test_clamped_region_flat(self, coeffs):
        start = 20.0 * math.log10(coeffs.x_sat) + 0.1
        rows = am_am_curve(coeffs, start, start + 10.0, 21)
        psat = 20.0 * math.log10(coeffs.y_sat)
        for _, pout, _ in rows:
            assert pout == pytest.approx(psat, abs=1e-12)

    def test_monotone_pout(self, coeffs):
        rows = am_am_curve(coeffs, -40.0, 20.0, 400)
        pout = [r[1] for r in rows]
        assert all(b >= a - 1e-12 for a, b in zip(pout, pout[1:]))

    def test_degenerate_grid_rejected(self, coeffs):
        with pytest.raises(ValueError):
            am_am_curve(coeffs, 5.0, 5.0, 10)
        with pytest.raises(ValueError):
            am_am_curve(coeffs, -40.0, 15.0, 1)


def fft_harmonics(a1, a3, amplitude, periods=8, samples_per_period=64):
    """Independent oracle: signed Fourier amplitudes of the raw cubic
    applied to a sampled cosine over an integer number of periods."""
    n = periods * samples_per_period
    t = np.arange(n)
    x = amplitude * np.cos(2.0 * np.pi * periods * t / n)
    y = a1 * x + a3 * x**3
    spectrum = np.fft.rfft(y) / n
    return {
        "dc": spectrum[0].real,
        "fundamental": 2.0 * spectrum[periods].real,
        "second": 2.0 * spectrum[2 * periods].real,
        "third": 2.0 * spectrum[3 * periods].real,
    }


class TestHarmonics:
    def test_linear_amplifier(self):
        from palink.amp_model import PolyCoeffs

        c = PolyCoeffs(a1=1.0, a3=0.0, x_sat=math.inf, y_sat=math.inf)
        h = harmonic_analysis(c, 1.0)
        assert h == HarmonicAmps(dc=0.0, fundamental=1.0, second=0.0, third=0.0)

    def test_datasheet_closed_forms(self, coeffs):
        h = harmonic_analysis(coeffs, 1.0)
        assert h.fundamental == pytest.approx(13.761, abs=1e-3)
        assert h.third == pytest.approx(-0.12144, abs=1e-5)
        assert h.dc == 0.0 and h.second == 0.0

    def test_third_harmonic_grows_as_a_squared(self, coeffs):
        h1 = harmonic_analysis(coeffs, 1.0)
        h2 = harmonic_analysis(coeffs, 2.0)
        ratio1 = h1.third / h1.fundamental
        ratio2 = h2.third / h2.fundamental
        # relative third-harmonic content grows roughly as A^2
        assert ratio2 / ratio1 == pytest.approx(4.0, rel=0.35)

    def test_fft_oracle(self, coeffs):
        h = harmonic_analysis(coeffs, 1.0)
        f = fft_harmonics(coeffs.a1, coeffs.a3, 1.0)
        assert f["fundamental"] == pytest.approx(h.fundamental, rel=1e-9)
        assert f["third"] == pytest.approx(h.third, rel=1e-9)
        assert abs(f["dc"]) < 1e-12 * abs(h.fundamental)
        assert abs(f["second"]) < 1e-12 * abs(h.fundamental)

    def test_out_of_region_rejected(self, coeffs):
        with pytest.raises(ValueError):
            harmonic_analysis(coeffs, coeffs.x_sat * 1.01)
        with pytest.raises(ValueError):
            harmonic_analysis(coeffs, 0.0)
