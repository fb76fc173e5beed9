"""Circulant-embedding simulation: exactness, determinism, independence."""

import numpy as np
import pytest

from wavespec import (
    DomainError,
    QuadratureConfig,
    SamplingScheme,
    WaveParams,
    autocovariance,
    simulate_gaussian,
)


class TestWhiteNoiseCase:
    def test_iid_with_target_variance(self):
        # A flat folded spectrum makes every embedding eigenvalue equal, so
        # draws are exactly i.i.d. normals; check the sample variance.
        scheme = SamplingScheme(delta=1.0, n=64)
        params = WaveParams(0.5, 0.7, 1.0, 4.0)
        quad = QuadratureConfig(m=2048, k_folds=1)
        target = autocovariance(params, scheme, quad).values[0]
        samples, report = simulate_gaussian(params, scheme, quad, seed=5, reps=400)
        assert samples.shape == (400, 64)
        assert report.clipped is False or report.min_eigenvalue < 0
        assert samples.var() == pytest.approx(target, rel=0.05)


class TestDeterminism:
    def test_same_seed_bit_identical(self, canonical_params):
        scheme = SamplingScheme(delta=0.78125, n=256)
        a, _ = simulate_gaussian(canonical_params, scheme, seed=123, reps=3)
        b, _ = simulate_gaussian(canonical_params, scheme, seed=123, reps=3)
        np.testing.assert_array_equal(a, b)

    def test_rep_offset_splits_the_stream(self, canonical_params):
        scheme = SamplingScheme(delta=0.78125, n=256)
        whole, _ = simulate_gaussian(canonical_params, scheme, seed=9, reps=4)
        tail, _ = simulate_gaussian(canonical_params, scheme, seed=9, reps=2, rep_offset=2)
        np.testing.assert_array_equal(whole[2:], tail)

    def test_different_seeds_differ(self, canonical_params):
        scheme = SamplingScheme(delta=0.78125, n=128)
        a, _ = simulate_gaussian(canonical_params, scheme, seed=1, reps=1)
        b, _ = simulate_gaussian(canonical_params, scheme, seed=2, reps=1)
        assert not np.array_equal(a, b)


class TestCovarianceMatching:
    def test_lagged_autocovariance_within_monte_carlo_error(self, canonical_params):
        scheme = SamplingScheme(delta=0.78125, n=256)
        reps = 4000
        samples, _ = simulate_gaussian(canonical_params, scheme, seed=77, reps=reps)
        target = autocovariance(
            canonical_params,
            scheme,
            QuadratureConfig(m=8192, k_folds=3),
            n_lags=21,
        ).values
        for lag in range(21):
            prods = samples[:, : 256 - lag if lag else 256] * (
                samples[:, lag:] if lag else samples
            )
            per_rep = prods.mean(axis=1)
            estimate = per_rep.mean()
            stderr = per_rep.std(ddof=1) / np.sqrt(reps)
            assert abs(estimate - target[lag]) < 3.5 * stderr, lag

    def test_reps_are_independent(self, canonical_params):
        scheme = SamplingScheme(delta=0.78125, n=64)
        samples, _ = simulate_gaussian(canonical_params, scheme, seed=31, reps=2000)
        crossed = np.mean(samples[0::2, 0] * samples[1::2, 0])
        var0 = samples[:, 0].var()
        assert abs(crossed) < 4.0 * var0 / np.sqrt(1000)


class TestValidation:
    def test_output_shape(self, canonical_params):
        scheme = SamplingScheme(delta=0.5, n=100)
        samples, report = simulate_gaussian(canonical_params, scheme, seed=0, reps=5)
        assert samples.shape == (5, 100)
        assert report.circulant_size >= 2 * (100 - 1)

    def test_short_record_grows_embedding(self, canonical_params):
        scheme = SamplingScheme(delta=0.78125, n=154)
        samples, report = simulate_gaussian(canonical_params, scheme, seed=0, reps=1)
        assert samples.shape == (1, 154)
        assert report.circulant_size > 2 * (154 - 1)

    def test_rejects_single_sample(self, canonical_params):
        with pytest.raises(DomainError):
            simulate_gaussian(canonical_params, SamplingScheme(delta=1.0, n=1))

    def test_rejects_zero_reps(self, canonical_params):
        with pytest.raises(DomainError):
            simulate_gaussian(
                canonical_params, SamplingScheme(delta=1.0, n=16), reps=0
            )
