"""Bridging continuous-frequency spectra to finite regularly-sampled records.

Covers aliasing (frequency folding at multiples of twice the Nyquist),
numerical autocovariance via FFT quadrature, the finite-sample expected
periodogram, first differencing, and the parameter gradients of each stage.

Frequency-grid conventions: internal arrays live in FFT output order over
the two-sided Fourier grid 2*pi*j/(n*delta); the quadrature grid is the
half-open interval [-pi/delta, pi/delta) discretized in M left-endpoint
bins, which is exactly the set of FFT frequencies of an M-point transform.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError, DomainError
from .model import (
    WaveParams,
    _density_positive,
    _gradient_positive,
    spectral_density,
    spectral_density_gradient,
)

DEFAULT_TAIL_THRESHOLD = 1.0e-6
MIN_QUADRATURE_SIZE = 8192

# Cap on the default fold count: beyond this the tail is so shallow that the
# threshold rule would demand grids of unreasonable size (it only binds for
# tail indices near the integrability boundary).
DEFAULT_MAX_FOLDS = 64


@dataclass(frozen=True)
class SamplingScheme:
    """Regular sampling: interval ``delta`` in seconds, record length ``n``."""

    delta: float
    n: int

    def __post_init__(self) -> None:
        if not (np.isfinite(self.delta) and self.delta > 0):
            raise DomainError(f"delta must be positive, got {self.delta}")
        if int(self.n) != self.n or self.n < 1:
            raise DomainError(f"n must be a positive integer, got {self.n}")

    @property
    def nyquist(self) -> float:
        """Highest observable angular frequency pi/delta, rad/s."""
        return np.pi / self.delta

    @property
    def duration(self) -> float:
        """Record duration n*delta in seconds."""
        return self.n * self.delta


@dataclass(frozen=True)
class TimeSeries:
    """Real elevation record (meters) with its sampling scheme."""

    values: np.ndarray
    scheme: SamplingScheme

    def __post_init__(self) -> None:
        values = np.asarray(self.values, dtype=float)
        object.__setattr__(self, "values", values)
        if values.ndim != 1:
            raise DomainError("time series values must be one-dimensional")
        if len(values) != self.scheme.n:
            raise DomainError(
                f"length {len(values)} does not match scheme n={self.scheme.n}"
            )
        if not np.all(np.isfinite(values)):
            raise DomainError("time series values must be finite")

    @classmethod
    def from_values(cls, values, delta: float) -> "TimeSeries":
        values = np.asarray(values, dtype=float)
        return cls(values, SamplingScheme(delta=float(delta), n=len(values)))

    @property
    def n(self) -> int:
        return self.scheme.n

    @property
    def delta(self) -> float:
        return self.scheme.delta

    def demeaned(self) -> "TimeSeries":
        return TimeSeries(self.values - self.values.mean(), self.scheme)


@dataclass(frozen=True)
class QuadratureConfig:
    """Resolution of the frequency-domain quadrature.

    ``m`` is the Riemann grid size over one Nyquist band, ``k_folds`` the
    number of frequency folds summed on each side when aliasing, and
    ``tail_threshold`` the density level (m^2 s/rad) the default fold count
    was chosen to reach.
    """

    m: int
    k_folds: int
    tail_threshold: float = DEFAULT_TAIL_THRESHOLD

    def __post_init__(self) -> None:
        if int(self.m) != self.m or self.m < 2:
            raise ConfigurationError(f"quadrature size m must be >= 2, got {self.m}")
        if int(self.k_folds) != self.k_folds or self.k_folds < 0:
            raise ConfigurationError(f"k_folds must be >= 0, got {self.k_folds}")
        if self.tail_threshold <= 0:
            raise ConfigurationError("tail_threshold must be positive")


def fold_count(
    params: WaveParams,
    scheme: SamplingScheme,
    tail_threshold: float = DEFAULT_TAIL_THRESHOLD,
    max_folds: int = DEFAULT_MAX_FOLDS,
) -> int:
    """Smallest K with the density below ``tail_threshold`` at (2K+1)*Nyquist.

    The evaluation point must also lie beyond the spectral peak, so the tail
    criterion is applied on the decaying side. Capped at ``max_folds``.
    """
    nyquist = scheme.nyquist
    for k in range(max_folds):
        edge = (2 * k + 1) * nyquist
        if edge > params.omega_p and spectral_density(edge, params) < tail_threshold:
            return k
    return max_folds


def default_quadrature(
    scheme: SamplingScheme,
    params: WaveParams | None = None,
    m: int | None = None,
    k_folds: int | None = None,
    tail_threshold: float = DEFAULT_TAIL_THRESHOLD,
) -> QuadratureConfig:
    """Quadrature with defaults m = max(8192, 2n) and K from the tail rule."""
    if m is None:
        m = max(MIN_QUADRATURE_SIZE, 2 * scheme.n)
    if k_folds is None:
        if params is None:
            raise ConfigurationError("k_folds needs either an explicit value or params")
        k_folds = fold_count(params, scheme, tail_threshold)
    return QuadratureConfig(m=int(m), k_folds=int(k_folds), tail_threshold=tail_threshold)


@dataclass(frozen=True)
class AcfSequence:
    """Autocovariance values at lags 0, delta, 2*delta, ... (m^2)."""

    values: np.ndarray
    scheme: SamplingScheme

    def __post_init__(self) -> None:
        values = np.asarray(self.values, dtype=float)
        object.__setattr__(self, "values", values)
        if values.ndim != 1 or len(values) == 0:
            raise DomainError("acf values must be a nonempty 1-d array")

    @property
    def n_lags(self) -> int:
        return len(self.values)


def difference_series(x: TimeSeries) -> TimeSeries:
    """First difference y_t = x_{t+1} - x_t; length drops by one."""
    if x.n < 2:
        raise DomainError("differencing needs at least 2 samples")
    return TimeSeries(
        np.diff(x.values), SamplingScheme(delta=x.delta, n=x.n - 1)
    )


def differencing_factor(omega, delta: float):
    """Spectral factor 4*sin^2(omega*delta/2) of the first difference."""
    return 4.0 * np.sin(np.asarray(omega, dtype=float) * delta / 2.0) ** 2


def differenced_density(omega, params: WaveParams, delta: float):
    """Continuous-frequency density of the first-differenced process."""
    return differencing_factor(omega, delta) * spectral_density(omega, params)


def _check_band(omega: np.ndarray, scheme: SamplingScheme) -> None:
    limit = scheme.nyquist * (1.0 + 1e-12)
    if np.any(np.abs(omega) > limit):
        raise DomainError("aliased density is defined only within the Nyquist band")


def _fold_offsets(scheme: SamplingScheme, quad: QuadratureConfig) -> np.ndarray:
    k = quad.k_folds
    return (2.0 * np.pi / scheme.delta) * np.arange(-k, k + 1)


def aliased_density(
    omega,
    params: WaveParams,
    scheme: SamplingScheme,
    quad: QuadratureConfig,
    differenced: bool = False,
):
    """Density of the sampled process: the fold sum over k of f(omega + 2*pi*k/delta).

    With ``differenced`` the first-difference factor multiplies every fold
    term; since the factor has period 2*pi/delta it is applied once at the
    base frequency.
    """
    omega_arr = np.asarray(omega, dtype=float)
    _check_band(omega_arr, scheme)
    folds = omega_arr[None, ...] + _fold_offsets(scheme, quad).reshape(
        (-1,) + (1,) * omega_arr.ndim
    )
    out = spectral_density(folds, params).sum(axis=0)
    if differenced:
        out = out * differencing_factor(omega_arr, scheme.delta)
    if omega_arr.ndim == 0:
        return float(out)
    return out


def aliased_density_gradient(
    omega,
    params: WaveParams,
    scheme: SamplingScheme,
    quad: QuadratureConfig,
    differenced: bool = False,
) -> np.ndarray:
    """Termwise fold sum of the density gradient; shape (4,) + shape(omega)."""
    omega_arr = np.asarray(omega, dtype=float)
    _check_band(omega_arr, scheme)
    folds = omega_arr[None, ...] + _fold_offsets(scheme, quad).reshape(
        (-1,) + (1,) * omega_arr.ndim
    )
    out = spectral_density_gradient(folds, params).sum(axis=1)
    if differenced:
        out = out * differencing_factor(omega_arr, scheme.delta)[None, ...]
    return out


def _quadrature_grid(scheme: SamplingScheme, quad: QuadratureConfig) -> np.ndarray:
    """The M FFT frequencies of the Nyquist band, in FFT output order."""
    return 2.0 * np.pi * np.fft.fftfreq(quad.m, d=scheme.delta)


def autocovariance(
    params: WaveParams,
    scheme: SamplingScheme,
    quad: QuadratureConfig,
    differenced: bool = False,
    n_lags: int | None = None,
) -> AcfSequence:
    """Autocovariance at lags 0..n_lags-1 by FFT quadrature of the aliased density.

    One length-M transform of the aliased (optionally differenced) density
    over the Nyquist band yields every requested lag; the left-endpoint
    Riemann rule on the FFT frequency grid makes the transform indexing
    exact.
    """
    if n_lags is None:
        n_lags = scheme.n
    if quad.m < 2 * scheme.n:
        raise ConfigurationError(
            f"quadrature size m={quad.m} must be at least 2*n={2 * scheme.n}"
        )
    if n_lags > quad.m // 2 + 1:
        raise ConfigurationError(
            f"m={quad.m} too small to resolve {n_lags} lags; need m >= 2*(n_lags-1)"
        )
    grid = _quadrature_grid(scheme, quad)
    vals = aliased_density(grid, params, scheme, quad, differenced=differenced)
    acf = (2.0 * np.pi / scheme.delta) * np.fft.ifft(vals).real
    return AcfSequence(acf[:n_lags], scheme)


def autocovariance_gradient(
    params: WaveParams,
    scheme: SamplingScheme,
    quad: QuadratureConfig,
    differenced: bool = False,
    n_lags: int | None = None,
) -> list[AcfSequence]:
    """Same quadrature applied to each component of the density gradient."""
    if n_lags is None:
        n_lags = scheme.n
    if quad.m < 2 * scheme.n:
        raise ConfigurationError(
            f"quadrature size m={quad.m} must be at least 2*n={2 * scheme.n}"
        )
    if n_lags > quad.m // 2 + 1:
        raise ConfigurationError(
            f"m={quad.m} too small to resolve {n_lags} lags; need m >= 2*(n_lags-1)"
        )
    grid = _quadrature_grid(scheme, quad)
    grads = aliased_density_gradient(grid, params, scheme, quad, differenced=differenced)
    out = []
    for comp in grads:
        acf = (2.0 * np.pi / scheme.delta) * np.fft.ifft(comp).real
        out.append(AcfSequence(acf[:n_lags], scheme))
    return out


def expected_periodogram(acf: AcfSequence) -> np.ndarray:
    """Expectation of the periodogram on the n-point Fourier grid (FFT order).

    Triangle-kernel weighted transform of the first n autocovariance lags;
    real by construction, and computed with a single length-n FFT.
    """
    n = acf.scheme.n
    if acf.n_lags < n:
        raise DomainError(f"need {n} autocovariance lags, got {acf.n_lags}")
    c = acf.values[:n]
    tau = np.arange(n)
    transform = np.fft.fft((1.0 - tau / n) * c)
    return (acf.scheme.delta / (2.0 * np.pi)) * (2.0 * transform.real - c[0])


def expected_periodogram_gradient(acf_gradients: list[AcfSequence]) -> np.ndarray:
    """Expected-periodogram transform of each gradient autocovariance.

    Returns shape (len(acf_gradients), n); linear, so an all-zero gradient
    autocovariance maps to an all-zero row.
    """
    if not acf_gradients:
        raise DomainError("need at least one gradient autocovariance")
    return np.stack([expected_periodogram(g) for g in acf_gradients])


class SpectralPipeline:
    """Reusable model-to-expected-periodogram evaluator on a fixed grid.

    Optimizers call the aliased density / autocovariance / expected
    periodogram chain hundreds of times with only the parameters changing;
    this precomputes the fold frequencies and their logs once and evaluates
    the density kernel into persistent scratch buffers. Results agree with
    the free functions above to floating-point rounding.

    Instances hold mutable workspaces: create one per fit or thread rather
    than sharing across concurrent calls.
    """

    def __init__(
        self,
        scheme: SamplingScheme,
        quad: QuadratureConfig,
        differenced: bool = False,
    ) -> None:
        if quad.m < 2 * scheme.n:
            raise ConfigurationError(
                f"quadrature size m={quad.m} must be at least 2*n={2 * scheme.n}"
            )
        self.scheme = scheme
        self.quad = quad
        self.differenced = differenced
        grid = _quadrature_grid(scheme, quad)
        folds = grid[None, :] + _fold_offsets(scheme, quad)[:, None]
        flat = np.abs(folds).ravel()
        self._zero_idx = np.flatnonzero(flat == 0.0)
        flat[self._zero_idx] = 1.0
        self._abs = flat
        self._log = np.log(flat)
        self._shape = folds.shape
        self._factor = differencing_factor(grid, scheme.delta) if differenced else None
        size = flat.size
        self._b1 = np.empty(size)
        self._b2 = np.empty(size)
        self._b3 = np.empty(size)
        self._b4 = np.empty(size)
        self._mask = np.empty(size, dtype=bool)

    def _inverse_widths(self, params: WaveParams, out: np.ndarray) -> np.ndarray:
        """-1/(2*sigma^2) profile over the fold grid, written into ``out``."""
        if params.smoothing is None:
            np.less_equal(self._abs, params.omega_p, out=self._mask)
            out.fill(-0.5 / params.sigma2**2)
            out[self._mask] = -0.5 / params.sigma1**2
            return out
        np.subtract(self._abs, params.omega_p, out=out)
        np.multiply(out, params.smoothing, out=out)
        np.arctan(out, out=out)
        np.multiply(out, (params.sigma2 - params.sigma1) / np.pi, out=out)
        np.add(out, 0.5 * (params.sigma1 + params.sigma2), out=out)
        np.square(out, out=out)
        np.divide(-0.5, out, out=out)
        return out

    def _flat_density(self, params: WaveParams) -> np.ndarray:
        """Density over the flattened fold grid, in a scratch buffer."""
        b1, b2, b3, b4 = self._b1, self._b2, self._b3, self._b4
        np.multiply(self._abs, 1.0 / params.omega_p, out=b1)
        np.subtract(b1, 1.0, out=b1)
        np.square(b1, out=b1)
        np.multiply(b1, self._inverse_widths(params, b4), out=b1)
        with np.errstate(over="ignore", under="ignore"):
            np.exp(b1, out=b1)
            np.multiply(b1, np.log(params.gamma), out=b1)
            np.multiply(self._log, -params.s, out=b2)
            np.add(b2, params.s * np.log(params.omega_p), out=b2)
            np.exp(b2, out=b2)
            np.multiply(self._log, -params.r, out=b3)
            np.add(b3, b1, out=b3)
            np.multiply(b2, params.r / params.s, out=b4)
            np.subtract(b3, b4, out=b3)
            np.add(b3, np.log(params.alpha / 2.0), out=b3)
            np.exp(b3, out=b3)
        b3[self._zero_idx] = 0.0
        return b3

    def aliased(self, params: WaveParams) -> np.ndarray:
        """Aliased (optionally differenced) density on the quadrature grid."""
        density = self._flat_density(params).reshape(self._shape).sum(axis=0)
        if self._factor is not None:
            density *= self._factor
        return density

    def aliased_gradient(self, params: WaveParams) -> np.ndarray:
        """(4, m) gradient stack of :meth:`aliased`."""
        _, grad = _gradient_positive(self._abs, params, self._log)
        grad[:, self._zero_idx] = 0.0
        grad = grad.reshape((4,) + self._shape).sum(axis=1)
        if self._factor is not None:
            grad = grad * self._factor[None, :]
        return grad

    def autocovariance(self, params: WaveParams, n_lags: int | None = None) -> AcfSequence:
        if n_lags is None:
            n_lags = self.scheme.n
        vals = self.aliased(params)
        acf = (2.0 * np.pi / self.scheme.delta) * np.fft.ifft(vals).real
        return AcfSequence(acf[:n_lags], self.scheme)

    def expected(self, params: WaveParams) -> np.ndarray:
        """Expected periodogram on the n-point Fourier grid, FFT order."""
        return expected_periodogram(self.autocovariance(params))

    def expected_and_gradient(self, params: WaveParams) -> tuple[np.ndarray, np.ndarray]:
        """Expected periodogram and its (4, n) parameter gradient."""
        expected = self.expected(params)
        grads = self.aliased_gradient(params)
        scale = 2.0 * np.pi / self.scheme.delta
        acf_grads = [
            AcfSequence(scale * np.fft.ifft(g).real[: self.scheme.n], self.scheme)
            for g in grads
        ]
        return expected, expected_periodogram_gradient(acf_grads)
