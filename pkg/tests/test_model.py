"""Spectral density values, symmetry, gradient consistency, integrability."""

import math

import numpy as np
import pytest

from wavespec import DomainError, WaveParams, spectral_density, spectral_density_gradient

from conftest import central_difference, gradient_scale_error


class TestDensityValues:
    def test_zero_frequency_is_zero(self, canonical_params):
        assert spectral_density(0.0, canonical_params) == 0.0

    def test_peak_value_matches_hand_formula(self, canonical_params):
        # At the peak the Gaussian bump exponent is 1 and the core reduces to
        # alpha * omega_p^-r * exp(-r/s) * gamma, halved for the two-sided form.
        hand = 0.7 * 0.7**-4 * math.exp(-1.0) * 3.3 / 2.0
        assert spectral_density(0.7, canonical_params) == pytest.approx(hand, rel=1e-12)
        assert hand == pytest.approx(1.769681, abs=5e-6)

    def test_even_in_frequency(self, canonical_params):
        omegas = np.linspace(0.05, 4.0, 101)
        np.testing.assert_array_equal(
            spectral_density(-omegas, canonical_params),
            spectral_density(omegas, canonical_params),
        )

    def test_unit_gamma_drops_peak_factor(self):
        # gamma^delta == 1 everywhere, so the density is the bare core and
        # in particular independent of the width constants.
        params_a = WaveParams(0.5, 0.9, 1.0, 4.5, sigma1=0.07, sigma2=0.09)
        params_b = WaveParams(0.5, 0.9, 1.0, 4.5, sigma1=0.02, sigma2=0.3)
        omegas = np.linspace(0.1, 3.5, 57)
        expected = 0.5 * omegas**-4.5 * np.exp(-(4.5 / 4.0) * (omegas / 0.9) ** -4.0) / 2.0
        np.testing.assert_allclose(spectral_density(omegas, params_a), expected, rtol=1e-12)
        np.testing.assert_array_equal(
            spectral_density(omegas, params_a), spectral_density(omegas, params_b)
        )

    def test_deep_tail_underflows_to_zero(self, canonical_params):
        assert spectral_density(1e-6, canonical_params) == 0.0

    def test_tail_bound(self, canonical_params):
        omegas = np.linspace(0.71, 50.0, 500)
        bound = 0.7 * 3.3 * omegas**-4.0 / 2.0
        assert np.all(spectral_density(omegas, canonical_params) <= bound * (1 + 1e-12))

    def test_integral_converges(self, canonical_params):
        def band_integral(w):
            grid = np.linspace(-w, w, 400_001)
            return np.trapezoid(spectral_density(grid, canonical_params), grid)

        w = 80.0
        assert abs(band_integral(2 * w) - band_integral(w)) < 1e-6

    def test_parameter_validation(self):
        with pytest.raises(DomainError):
            WaveParams(-1.0, 0.7, 3.3, 4.0)
        with pytest.raises(DomainError):
            WaveParams(0.7, 0.0, 3.3, 4.0)
        with pytest.raises(DomainError):
            WaveParams(0.7, 0.7, 0.99, 4.0)
        with pytest.raises(DomainError):
            WaveParams(0.7, 0.7, 3.3, 1.0)
        with pytest.raises(DomainError):
            WaveParams(0.7, 0.7, 3.3, 4.0, smoothing=0.0)


class TestGradient:
    def test_zero_frequency_gradient_is_zero(self, canonical_params):
        np.testing.assert_array_equal(
            spectral_density_gradient(0.0, canonical_params), np.zeros(4)
        )

    def test_scale_partial_at_peak(self, canonical_params):
        grad = spectral_density_gradient(0.7, canonical_params)
        expected = spectral_density(0.7, canonical_params) / 0.7
        assert grad[0] == pytest.approx(expected, rel=1e-14)
        assert expected == pytest.approx(2.528116, abs=5e-6)

    def test_matches_central_differences_at_interior_frequency(self, canonical_params):
        omega = 1.1
        analytic = spectral_density_gradient(omega, canonical_params)
        approx = np.array(
            [
                central_difference(lambda p: spectral_density(omega, p), canonical_params, i)
                for i in range(4)
            ]
        )
        assert gradient_scale_error(analytic, approx) < 1e-6

    def test_gradient_consistency_over_parameter_grid(self):
        rng = np.random.default_rng(3)
        omegas = np.sort(rng.uniform(0.05, 4.0, 50))
        for alpha in (0.3, 0.7, 1.5):
            for omega_p in (0.5, 0.7, 1.2):
                for gamma in (1.5, 3.3, 5.0):
                    for r in (3.0, 4.0, 5.5):
                        params = WaveParams(alpha, omega_p, gamma, r)
                        analytic = spectral_density_gradient(omegas, params)
                        for i in range(4):
                            approx = central_difference(
                                lambda p: spectral_density(omegas, p), params, i
                            )
                            assert gradient_scale_error(analytic[i], approx) < 1e-6, (
                                params,
                                i,
                            )

    def test_even_extension(self, canonical_params):
        omegas = np.linspace(0.1, 3.9, 40)
        np.testing.assert_array_equal(
            spectral_density_gradient(-omegas, canonical_params),
            spectral_density_gradient(omegas, canonical_params),
        )

    def test_vanishes_where_density_underflows(self, canonical_params):
        np.testing.assert_array_equal(
            spectral_density_gradient(1e-6, canonical_params), np.zeros(4)
        )


class TestSmoothedWidth:
    def test_converges_to_step_profile(self, canonical_params):
        smoothed = WaveParams(0.7, 0.7, 3.3, 4.0, smoothing=1e8)
        omegas = np.linspace(0.01, 4.0, 2000)
        omegas = omegas[np.abs(omegas - 0.7) > 1e-3]
        diff = np.abs(
            spectral_density(omegas, smoothed) - spectral_density(omegas, canonical_params)
        )
        assert diff.max() < 5e-8

    def test_gradient_matches_central_differences(self):
        params = WaveParams(0.7, 0.7, 3.3, 4.0, smoothing=1e4)
        omegas = np.linspace(0.3, 2.0, 30)
        analytic = spectral_density_gradient(omegas, params)
        for i in range(4):
            approx = central_difference(lambda p: spectral_density(omegas, p), params, i)
            assert gradient_scale_error(analytic[i], approx) < 1e-6
