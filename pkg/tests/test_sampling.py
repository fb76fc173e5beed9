"""Aliasing, quadrature autocovariance, expected periodogram, differencing."""

import numpy as np
import pytest

from wavespec import (
    AcfSequence,
    ConfigurationError,
    DomainError,
    QuadratureConfig,
    SamplingScheme,
    SpectralPipeline,
    TimeSeries,
    WaveParams,
    aliased_density,
    aliased_density_gradient,
    autocovariance,
    autocovariance_gradient,
    default_quadrature,
    difference_series,
    differenced_density,
    expected_periodogram,
    expected_periodogram_gradient,
    spectral_density,
    spectral_density_gradient,
)
from wavespec.sampling import differencing_factor, fold_count

from conftest import central_difference, gradient_scale_error


class TestAliasedDensity:
    def test_zero_folds_reduce_to_plain_density(self, canonical_params, canonical_scheme):
        quad = QuadratureConfig(m=8192, k_folds=0)
        omegas = np.linspace(-4.0, 4.0, 41)
        np.testing.assert_array_equal(
            aliased_density(omegas, canonical_params, canonical_scheme, quad),
            spectral_density(omegas, canonical_params),
        )

    def test_positive_at_zero_with_folding(self, canonical_params, canonical_scheme, canonical_quad):
        assert aliased_density(0.0, canonical_params, canonical_scheme, canonical_quad) > 0.0

    def test_default_fold_count_satisfies_threshold(self, canonical_params, canonical_scheme):
        k = fold_count(canonical_params, canonical_scheme, 1e-6)
        edge = (2 * k + 1) * canonical_scheme.nyquist
        assert spectral_density(edge, canonical_params) < 1e-6
        if k > 0:
            inner = (2 * (k - 1) + 1) * canonical_scheme.nyquist
            assert spectral_density(inner, canonical_params) >= 1e-6

    def test_matches_wide_truncation_oracle(self, canonical_params, canonical_scheme, canonical_quad):
        wide = QuadratureConfig(m=canonical_quad.m, k_folds=10 * canonical_quad.k_folds)
        value = aliased_density(0.7, canonical_params, canonical_scheme, canonical_quad)
        oracle = aliased_density(0.7, canonical_params, canonical_scheme, wide)
        # The omitted folds each sit below the 1e-6 threshold but their total
        # mass is ~1.25e-6 for this configuration.
        assert abs(value - oracle) < 2e-6

    def test_dominates_plain_density(self, canonical_params, canonical_scheme, canonical_quad):
        omegas = np.linspace(-4.0, 4.0, 101)
        assert np.all(
            aliased_density(omegas, canonical_params, canonical_scheme, canonical_quad)
            >= spectral_density(omegas, canonical_params)
        )

    def test_fold_invariance_beyond_threshold(self, canonical_params, canonical_scheme, canonical_quad):
        omegas = np.linspace(-4.0, 4.0, 101)
        base = aliased_density(omegas, canonical_params, canonical_scheme, canonical_quad)
        extra = 5
        more = QuadratureConfig(m=canonical_quad.m, k_folds=canonical_quad.k_folds + extra)
        grown = aliased_density(omegas, canonical_params, canonical_scheme, more)
        assert np.max(grown - base) < canonical_quad.tail_threshold * 2 * extra

    def test_rejects_beyond_nyquist(self, canonical_params, canonical_scheme, canonical_quad):
        with pytest.raises(DomainError):
            aliased_density(4.1, canonical_params, canonical_scheme, canonical_quad)


class TestAliasedGradient:
    def test_zero_folds_reduce_to_plain_gradient(self, canonical_params, canonical_scheme):
        quad = QuadratureConfig(m=8192, k_folds=0)
        omegas = np.linspace(-3.9, 3.9, 21)
        np.testing.assert_array_equal(
            aliased_density_gradient(omegas, canonical_params, canonical_scheme, quad),
            spectral_density_gradient(omegas, canonical_params),
        )

    def test_zero_frequency_zero_folds(self, canonical_params, canonical_scheme):
        quad = QuadratureConfig(m=8192, k_folds=0)
        np.testing.assert_array_equal(
            aliased_density_gradient(0.0, canonical_params, canonical_scheme, quad),
            np.zeros(4),
        )

    def test_matches_central_differences(self, canonical_params):
        scheme = SamplingScheme(delta=1.0, n=128)
        quad = default_quadrature(scheme, canonical_params)
        omega = 0.5
        analytic = aliased_density_gradient(omega, canonical_params, scheme, quad)
        approx = np.array(
            [
                central_difference(
                    lambda p: aliased_density(omega, p, scheme, quad), canonical_params, i
                )
                for i in range(4)
            ]
        )
        assert gradient_scale_error(analytic, approx) < 1e-6


class TestAutocovariance:
    def test_lag_zero_matches_refined_quadrature(
        self, canonical_params, canonical_scheme, canonical_quad
    ):
        acf = autocovariance(canonical_params, canonical_scheme, canonical_quad)
        fine = 16 * canonical_quad.m
        grid = 2.0 * np.pi * np.fft.fftfreq(fine, d=canonical_scheme.delta)
        weight = 2.0 * np.pi / (fine * canonical_scheme.delta)
        oracle = weight * aliased_density(
            grid, canonical_params, canonical_scheme, canonical_quad
        ).sum()
        assert acf.values[0] == pytest.approx(oracle, rel=1e-6)

    def test_bounded_by_lag_zero(self, canonical_params, canonical_scheme, canonical_quad):
        acf = autocovariance(canonical_params, canonical_scheme, canonical_quad)
        assert np.all(np.abs(acf.values) <= acf.values[0] * (1 + 1e-12))

    def test_self_convergence_in_grid_size(self, canonical_params, canonical_scheme, canonical_quad):
        base = autocovariance(canonical_params, canonical_scheme, canonical_quad).values
        doubled = autocovariance(
            canonical_params,
            canonical_scheme,
            QuadratureConfig(2 * canonical_quad.m, canonical_quad.k_folds),
        ).values
        scale = np.abs(base).max()
        assert np.max(np.abs(base - doubled)) / scale < 1e-6

    def test_rejects_small_grid(self, canonical_params, canonical_scheme):
        with pytest.raises(ConfigurationError):
            autocovariance(
                canonical_params, canonical_scheme, QuadratureConfig(m=4096, k_folds=3)
            )


class TestAutocovarianceGradient:
    def test_scale_partial_is_acf_over_alpha(
        self, canonical_params, canonical_scheme, canonical_quad
    ):
        acf = autocovariance(canonical_params, canonical_scheme, canonical_quad, n_lags=64)
        grads = autocovariance_gradient(
            canonical_params, canonical_scheme, canonical_quad, n_lags=64
        )
        np.testing.assert_allclose(grads[0].values, acf.values / 0.7, rtol=1e-12)

    def test_matches_central_differences(self, canonical_params, canonical_scheme, canonical_quad):
        grads = autocovariance_gradient(
            canonical_params, canonical_scheme, canonical_quad, n_lags=64
        )
        for i in range(4):
            approx = central_difference(
                lambda p: autocovariance(
                    p, canonical_scheme, canonical_quad, n_lags=64
                ).values,
                canonical_params,
                i,
            )
            assert gradient_scale_error(grads[i].values, approx) < 1e-5

    def test_unit_gamma_edge_matches_direct_quadrature(self, canonical_scheme):
        params = WaveParams(0.7, 0.7, 1.0, 5.0)
        quad = default_quadrature(canonical_scheme, params)
        grads = autocovariance_gradient(params, canonical_scheme, quad, n_lags=16)
        assert np.all(np.isfinite(grads[2].values))
        # Direct left-endpoint quadrature of the gamma partial of the folded density.
        grid = 2.0 * np.pi * np.fft.fftfreq(quad.m, d=canonical_scheme.delta)
        partial = aliased_density_gradient(grid, params, canonical_scheme, quad)[2]
        weight = 2.0 * np.pi / (quad.m * canonical_scheme.delta)
        for tau in (0, 5, 15):
            direct = weight * np.sum(
                partial * np.cos(grid * tau * canonical_scheme.delta)
            )
            assert grads[2].values[tau] == pytest.approx(direct, abs=1e-12)


class TestExpectedPeriodogram:
    def test_white_noise_is_flat(self):
        scheme = SamplingScheme(delta=0.5, n=8)
        acf = AcfSequence(np.array([2.0, 0, 0, 0, 0, 0, 0, 0]), scheme)
        expected = expected_periodogram(acf)
        np.testing.assert_allclose(expected, 0.5 * 2.0 / (2 * np.pi), rtol=1e-12)

    def test_single_sample_degenerate_case(self):
        scheme = SamplingScheme(delta=0.5, n=1)
        acf = AcfSequence(np.array([3.0]), scheme)
        assert expected_periodogram(acf)[0] == pytest.approx(
            0.5 * 3.0 / (2 * np.pi), rel=1e-12
        )

    def test_sum_rule(self, canonical_params, canonical_scheme, canonical_quad):
        acf = autocovariance(canonical_params, canonical_scheme, canonical_quad)
        expected = expected_periodogram(acf)
        total = (2 * np.pi / (canonical_scheme.n * canonical_scheme.delta)) * expected.sum()
        assert total == pytest.approx(acf.values[0], rel=1e-10)

    def test_nonnegative(self, canonical_params, canonical_scheme, canonical_quad):
        acf = autocovariance(canonical_params, canonical_scheme, canonical_quad)
        assert expected_periodogram(acf).min() >= 0.0

    def test_requires_enough_lags(self, canonical_scheme):
        acf = AcfSequence(np.ones(16), canonical_scheme)
        with pytest.raises(DomainError):
            expected_periodogram(acf)


class TestExpectedPeriodogramGradient:
    def test_scale_partial_is_expected_over_alpha(
        self, canonical_params, canonical_scheme, canonical_quad
    ):
        acf = autocovariance(canonical_params, canonical_scheme, canonical_quad)
        grads = autocovariance_gradient(canonical_params, canonical_scheme, canonical_quad)
        expected = expected_periodogram(acf)
        grad_rows = expected_periodogram_gradient(grads)
        np.testing.assert_allclose(grad_rows[0], expected / 0.7, rtol=1e-12)

    def test_matches_central_differences(self, canonical_params):
        scheme = SamplingScheme(delta=0.78125, n=128)
        quad = default_quadrature(scheme, canonical_params)

        def expected_of(params):
            return expected_periodogram(autocovariance(params, scheme, quad))

        grad_rows = expected_periodogram_gradient(
            autocovariance_gradient(canonical_params, scheme, quad)
        )
        for i in range(4):
            approx = central_difference(expected_of, canonical_params, i)
            assert gradient_scale_error(grad_rows[i], approx) < 1e-5

    def test_zero_gradient_acf_maps_to_zero(self, canonical_scheme):
        zero = AcfSequence(np.zeros(canonical_scheme.n), canonical_scheme)
        np.testing.assert_array_equal(
            expected_periodogram_gradient([zero]), np.zeros((1, canonical_scheme.n))
        )


class TestDifferencing:
    def test_difference_series_values(self):
        x = TimeSeries.from_values([1.0, 2.0, 4.0], delta=1.0)
        diffed = difference_series(x)
        np.testing.assert_array_equal(diffed.values, [1.0, 2.0])
        assert diffed.n == 2

    def test_constant_series_differences_to_zero(self):
        x = TimeSeries.from_values(np.full(16, 3.7), delta=0.5)
        np.testing.assert_array_equal(difference_series(x).values, np.zeros(15))

    def test_linear_ramp_differences_to_constant(self):
        delta, slope = 0.25, 1.3
        t = np.arange(32) * delta
        x = TimeSeries.from_values(slope * t, delta=delta)
        np.testing.assert_allclose(difference_series(x).values, slope * delta, rtol=1e-12)

    def test_too_short_series_rejected(self):
        with pytest.raises(DomainError):
            difference_series(TimeSeries.from_values([1.0], delta=1.0))

    def test_differenced_density_endpoints(self, canonical_params, canonical_scheme):
        delta = canonical_scheme.delta
        assert differenced_density(0.0, canonical_params, delta) == 0.0
        nyq = canonical_scheme.nyquist
        assert differenced_density(nyq, canonical_params, delta) == pytest.approx(
            4.0 * spectral_density(nyq, canonical_params), rel=1e-12
        )

    def test_factor_range(self, canonical_scheme):
        omegas = np.linspace(-20, 20, 10001)
        factor = differencing_factor(omegas, canonical_scheme.delta)
        assert factor.min() >= 0.0 and factor.max() <= 4.0 + 1e-12

    def test_differenced_acf_identity(self, canonical_params, canonical_scheme, canonical_quad):
        lags = 100
        diffed = autocovariance(
            canonical_params, canonical_scheme, canonical_quad, differenced=True, n_lags=lags
        ).values
        plain = autocovariance(
            canonical_params, canonical_scheme, canonical_quad, n_lags=lags + 2
        ).values
        backward = np.concatenate([[plain[1]], plain[: lags - 1]])
        identity = 2 * plain[:lags] - plain[1 : lags + 1] - backward
        assert np.max(np.abs(diffed - identity)) < 1e-6


class TestSpectralPipeline:
    def test_matches_free_functions(self, canonical_params, canonical_scheme, canonical_quad):
        pipeline = SpectralPipeline(canonical_scheme, canonical_quad)
        grid = 2.0 * np.pi * np.fft.fftfreq(canonical_quad.m, d=canonical_scheme.delta)
        np.testing.assert_allclose(
            pipeline.aliased(canonical_params),
            aliased_density(grid, canonical_params, canonical_scheme, canonical_quad),
            rtol=1e-13,
            atol=1e-300,
        )
        np.testing.assert_allclose(
            pipeline.autocovariance(canonical_params).values,
            autocovariance(canonical_params, canonical_scheme, canonical_quad).values,
            rtol=1e-12,
            atol=1e-15,
        )

    def test_matches_free_functions_differenced(
        self, canonical_params, canonical_scheme, canonical_quad
    ):
        pipeline = SpectralPipeline(canonical_scheme, canonical_quad, differenced=True)
        np.testing.assert_allclose(
            pipeline.expected(canonical_params),
            expected_periodogram(
                autocovariance(
                    canonical_params, canonical_scheme, canonical_quad, differenced=True
                )
            ),
            rtol=1e-12,
            atol=1e-16,
        )

    def test_gradient_stack_matches(self, canonical_params, canonical_scheme, canonical_quad):
        pipeline = SpectralPipeline(canonical_scheme, canonical_quad)
        _, grads = pipeline.expected_and_gradient(canonical_params)
        rows = expected_periodogram_gradient(
            autocovariance_gradient(canonical_params, canonical_scheme, canonical_quad)
        )
        np.testing.assert_allclose(grads, rows, rtol=1e-12, atol=1e-16)
