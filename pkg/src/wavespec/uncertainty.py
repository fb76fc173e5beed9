"""Sandwich variance of the de-biased Whittle estimator and confidence intervals.

The estimator variance is approximated by H^{-1} S H^{-1}, where H is the
expected Hessian of the spectral likelihood (a Gram sum over the selected
frequencies) and S the covariance of its score. S needs the full covariance
matrix of periodogram ordinates, which is assembled from one length-M FFT
of the phase-shifted aliased density followed by one N-by-N 2D FFT.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import ndtri

from .errors import ConfigurationError, DomainError
from .model import WaveParams
from .nonparam import FrequencySelection
from .sampling import (
    QuadratureConfig,
    SamplingScheme,
    SpectralPipeline,
    aliased_density,
)

# Two-sided 95% normal quantile, pinned; other levels go through the
# inverse normal CDF.
Z_95 = 1.959964

# Free-parameter lower edges of the parameter space (alpha, omega_p, gamma, r):
# confidence intervals are clipped here.
PARAM_SPACE_FLOOR = np.array([0.0, 0.0, 1.0, 1.0])


@dataclass(frozen=True)
class SandwichVariance:
    """The three matrices of the variance decomposition, in free-param order."""

    hessian_expect: np.ndarray
    score_var: np.ndarray
    var_theta: np.ndarray


@dataclass(frozen=True)
class ConfidenceResult:
    """Sandwich variance with per-parameter normal confidence intervals."""

    sandwich: SandwichVariance
    level: float
    z: float
    se: np.ndarray
    lower: np.ndarray
    upper: np.ndarray
    clipped_lower: np.ndarray
    pinv_used: bool


def normal_quantile(level: float) -> float:
    """Two-sided normal critical value for a confidence level in (0, 1)."""
    if not 0.0 < level < 1.0:
        raise ConfigurationError(f"confidence level must be in (0,1), got {level}")
    if level == 0.95:
        return Z_95
    return float(ndtri(0.5 + level / 2.0))


def lag_kernel(
    params: WaveParams,
    scheme: SamplingScheme,
    quad: QuadratureConfig,
    differenced: bool = False,
) -> np.ndarray:
    """Fourier coefficients of the aliased density over lags -(n-1)..(n-1).

    Returns the complex sequence Q(t), t = 0..2n-2, where index t holds the
    band integral of the density against exp(-i*delta*(t-(n-1))*omega),
    approximated by the left-endpoint Riemann rule on the M-point grid
    anchored at zero. This is the building block of the periodogram
    covariance: the covariance kernel at Fourier frequencies j and k
    involves Q at index sums r+s.
    """
    n = scheme.n
    if quad.m < 2 * n - 1:
        raise ConfigurationError(
            f"quadrature size m={quad.m} must be at least 2n-1={2 * n - 1}"
        )
    grid = 2.0 * np.pi * np.fft.fftfreq(quad.m, d=scheme.delta)
    density = aliased_density(grid, params, scheme, quad, differenced=differenced)
    return _kernel_transform(density, scheme.delta, n)


def _kernel_transform(density_fft_order: np.ndarray, delta: float, n: int) -> np.ndarray:
    """Lag kernel of an arbitrary density sampled on the FFT-ordered band grid."""
    m = len(density_fft_order)
    grid = 2.0 * np.pi * np.fft.fftfreq(m, d=delta)
    phase = np.exp(1j * delta * (n - 1) * grid)
    transform = np.fft.fft(density_fft_order * phase)
    return (2.0 * np.pi / (m * delta)) * transform[: 2 * n - 1]


def periodogram_covariance(
    params: WaveParams,
    scheme: SamplingScheme,
    quad: QuadratureConfig,
    differenced: bool = False,
) -> np.ndarray:
    """Covariance of periodogram ordinates over the full n-point Fourier grid.

    Entry (j, k), in FFT index order, is the squared modulus of the density
    integrated against the two Dirichlet kernels centered at frequencies j
    and k. Assembled as the 2D inverse transform of the Hankel matrix
    Q(r+s); O(n^2 log n) overall.

    For a real-valued record this kernel omits the coupling between a
    frequency and its sign mirror; see :func:`real_record_covariance`.
    """
    n = scheme.n
    kernel = lag_kernel(params, scheme, quad, differenced=differenced)
    idx = np.add.outer(np.arange(n), np.arange(n))
    hankel = kernel[idx]
    grid_sum = (n * n) * np.fft.ifft2(hankel).T
    cov = np.abs(scheme.delta / (2.0 * np.pi * n) * grid_sum) ** 2
    return cov


def real_record_covariance(cov: np.ndarray) -> np.ndarray:
    """Complete a periodogram covariance for real-valued records.

    The periodogram of a real record is even, so ordinates at j and -j are
    identical; the fourth-moment identity adds the kernel evaluated at the
    sign-mirrored column to the plain kernel. Input and output are full-grid
    matrices in FFT index order.
    """
    n = cov.shape[0]
    mirror = (-np.arange(n)) % n
    return cov + cov[:, mirror]


def correlation_matrix(
    params: WaveParams,
    scheme: SamplingScheme,
    quad: QuadratureConfig,
    differenced: bool = False,
) -> np.ndarray:
    """Correlation form of :func:`periodogram_covariance`; unit diagonal."""
    cov = periodogram_covariance(params, scheme, quad, differenced=differenced)
    scale = np.sqrt(np.diag(cov))
    if np.any(scale <= 0):
        raise DomainError("periodogram covariance has a nonpositive diagonal")
    return cov / np.outer(scale, scale)


def _gradient_ratios(
    params: WaveParams,
    selection: FrequencySelection,
    quad: QuadratureConfig,
    differenced: bool,
    pipeline: SpectralPipeline | None,
) -> tuple[np.ndarray, np.ndarray]:
    """Expected periodogram at the selection and its gradient, as (f, g)."""
    if pipeline is None:
        pipeline = SpectralPipeline(selection.scheme, quad, differenced=differenced)
    expected, grads = pipeline.expected_and_gradient(params)
    sel = selection.fft_indices
    model = expected[sel]
    if np.any(model <= 0) or not np.all(np.isfinite(model)):
        raise DomainError("expected periodogram must be positive on the selection")
    return model, grads[:, sel]


def expected_hessian(
    params: WaveParams,
    selection: FrequencySelection,
    quad: QuadratureConfig,
    differenced: bool = False,
    pipeline: SpectralPipeline | None = None,
) -> np.ndarray:
    """Expectation of the spectral-likelihood Hessian: minus a Gram matrix.

    Built from first derivatives of the expected periodogram only; always
    symmetric negative semidefinite.
    """
    model, grads = _gradient_ratios(params, selection, quad, differenced, pipeline)
    b = grads / model[None, :]
    return -(b @ b.T)


def score_variance(
    params: WaveParams,
    selection: FrequencySelection,
    cov: np.ndarray,
    quad: QuadratureConfig,
    differenced: bool = False,
    pipeline: SpectralPipeline | None = None,
) -> np.ndarray:
    """Covariance of the likelihood score under a periodogram covariance ``cov``.

    Bilinear reduction a C a^T of the full-grid covariance to the selected
    indices, with a the gradient-over-squared-model weights. Pass the
    real-record completed covariance (see :func:`real_record_covariance`)
    when the score is that of a real-valued record.
    """
    n = selection.scheme.n
    if cov.shape != (n, n):
        raise DomainError(f"covariance must be {n}x{n}, got {cov.shape}")
    model, grads = _gradient_ratios(params, selection, quad, differenced, pipeline)
    a = grads / model[None, :] ** 2
    sel = selection.fft_indices
    s = a @ cov[np.ix_(sel, sel)] @ a.T
    return 0.5 * (s + s.T)


def estimator_variance(
    params: WaveParams,
    selection: FrequencySelection,
    quad: QuadratureConfig,
    differenced: bool = False,
) -> tuple[SandwichVariance, bool]:
    """Plug-in sandwich variance H^{-1} S H^{-1} at the given parameters.

    Returns the matrix triple and whether a pseudo-inverse of the expected
    Hessian was needed (flagged instead of failing).
    """
    pipeline = SpectralPipeline(selection.scheme, quad, differenced=differenced)
    hess = expected_hessian(params, selection, quad, differenced, pipeline)
    cov = periodogram_covariance(params, selection.scheme, quad, differenced)
    score = score_variance(
        params, selection, real_record_covariance(cov), quad, differenced, pipeline
    )
    pinv_used = False
    try:
        hess_inv = np.linalg.inv(hess)
    except np.linalg.LinAlgError:
        hess_inv = np.linalg.pinv(hess)
        pinv_used = True
    var = hess_inv @ score @ hess_inv
    var = 0.5 * (var + var.T)
    return SandwichVariance(hess, score, var), pinv_used


def confidence_intervals(
    params: WaveParams,
    selection: FrequencySelection,
    quad: QuadratureConfig,
    differenced: bool = False,
    level: float = 0.95,
) -> ConfidenceResult:
    """Normal-theory confidence intervals, lower ends clipped to the parameter space."""
    sandwich, pinv_used = estimator_variance(params, selection, quad, differenced)
    z = normal_quantile(level)
    variances = np.clip(np.diag(sandwich.var_theta), 0.0, None)
    se = np.sqrt(variances)
    center = params.free_vector()
    lower_raw = center - z * se
    upper = center + z * se
    lower = np.maximum(lower_raw, PARAM_SPACE_FLOOR)
    return ConfidenceResult(
        sandwich=sandwich,
        level=level,
        z=z,
        se=se,
        lower=lower,
        upper=upper,
        clipped_lower=lower_raw < PARAM_SPACE_FLOOR,
        pinv_used=pinv_used,
    )


def fit_confidence(fit_result, level: float = 0.95) -> ConfidenceResult:
    """Confidence intervals for a finished fit (plug-in at the estimate)."""
    return confidence_intervals(
        fit_result.params,
        fit_result.selection,
        fit_result.quad,
        differenced=fit_result.method.differenced,
        level=level,
    )
