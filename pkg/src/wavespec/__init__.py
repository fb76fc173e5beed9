"""Parametric ocean-wave spectrum fitting via the de-biased Whittle likelihood.

Core surface: the generalized JONSWAP model (:mod:`wavespec.model`), the
sampling bridge from continuous spectra to finite records
(:mod:`wavespec.sampling`), non-parametric estimators
(:mod:`wavespec.nonparam`), six fitting objectives and the optimizer driver
(:mod:`wavespec.estimation`), exact Gaussian simulation
(:mod:`wavespec.simulation`), sandwich-variance confidence intervals
(:mod:`wavespec.uncertainty`), model diagnostics
(:mod:`wavespec.diagnostics`) and a Monte Carlo benchmark harness
(:mod:`wavespec.benchmark`). The FastAPI service lives in
:mod:`wavespec.service`, with :mod:`wavespec.cli` as a thin client.
"""

from .errors import ConfigurationError, DomainError, NumericalError, WaveSpecError
from .estimation import (
    ALIASED_WHITTLE,
    BARTLETT_LEAST_SQUARES,
    DEBIASED_WHITTLE,
    GAUSSIAN_ML,
    LEAST_SQUARES,
    WHITTLE,
    FitResult,
    Method,
    OptimizerConfig,
    fit,
    initialize,
)
from .model import WaveParams, spectral_density, spectral_density_gradient
from .nonparam import (
    FrequencySelection,
    SpectralEstimate,
    bartlett,
    fourier_frequencies,
    periodogram,
    select_frequencies,
)
from .sampling import (
    AcfSequence,
    QuadratureConfig,
    SamplingScheme,
    SpectralPipeline,
    TimeSeries,
    aliased_density,
    aliased_density_gradient,
    autocovariance,
    autocovariance_gradient,
    default_quadrature,
    difference_series,
    differenced_density,
    expected_periodogram,
    expected_periodogram_gradient,
)
from .simulation import EmbeddingReport, simulate_gaussian
from .uncertainty import (
    ConfidenceResult,
    SandwichVariance,
    confidence_intervals,
    correlation_matrix,
    estimator_variance,
    expected_hessian,
    fit_confidence,
    lag_kernel,
    periodogram_covariance,
    real_record_covariance,
    score_variance,
)
from .diagnostics import QqTable, overlay_table, qq_ratios

__version__ = "0.1.0"

__all__ = [
    "AcfSequence",
    "ALIASED_WHITTLE",
    "BARTLETT_LEAST_SQUARES",
    "ConfidenceResult",
    "ConfigurationError",
    "DEBIASED_WHITTLE",
    "DomainError",
    "EmbeddingReport",
    "FitResult",
    "FrequencySelection",
    "GAUSSIAN_ML",
    "LEAST_SQUARES",
    "Method",
    "NumericalError",
    "OptimizerConfig",
    "QqTable",
    "QuadratureConfig",
    "SamplingScheme",
    "SandwichVariance",
    "SpectralEstimate",
    "SpectralPipeline",
    "TimeSeries",
    "WaveParams",
    "WaveSpecError",
    "WHITTLE",
    "aliased_density",
    "aliased_density_gradient",
    "autocovariance",
    "autocovariance_gradient",
    "bartlett",
    "confidence_intervals",
    "correlation_matrix",
    "default_quadrature",
    "difference_series",
    "differenced_density",
    "estimator_variance",
    "expected_hessian",
    "expected_periodogram",
    "expected_periodogram_gradient",
    "fit",
    "fit_confidence",
    "fourier_frequencies",
    "initialize",
    "lag_kernel",
    "overlay_table",
    "periodogram",
    "periodogram_covariance",
    "qq_ratios",
    "real_record_covariance",
    "score_variance",
    "select_frequencies",
    "simulate_gaussian",
    "spectral_density",
    "spectral_density_gradient",
]
