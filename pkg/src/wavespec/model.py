"""Generalized JONSWAP spectral density and its analytic parameter gradient.

Angular frequency is in rad/s throughout. Densities are two-sided, in
m^2 s/rad: the classical one-sided form is halved and extended evenly to
negative frequencies, with the value at exactly zero frequency defined as 0.

The free parameters are the scale ``alpha``, the peak angular frequency
``omega_p``, the peak enhancement factor ``gamma`` and the tail decay index
``r``; the width constants ``sigma1``/``sigma2`` and shape exponent ``s``
are held fixed during fitting.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass

import numpy as np

from .errors import DomainError

FREE_PARAM_NAMES = ("alpha", "omega_p", "gamma", "r")

# Arctan steepness used for the smoothed width profile when a caller enables
# smoothing without picking a constant; large enough to be indistinguishable
# from the step profile away from the peak yet numerically stable.
DEFAULT_SMOOTHING = 1.0e4


@dataclass(frozen=True)
class WaveParams:
    """Parameter vector of the generalized JONSWAP form.

    Attributes
    ----------
    alpha : float
        Energy scale, m^2 s^(1-r) rad^(r-1); must be > 0.
    omega_p : float
        Peak angular frequency, rad/s; must be > 0.
    gamma : float
        Peak enhancement factor, dimensionless; must be >= 1.
    r : float
        Tail decay index (high-frequency roll-off exponent); must be > 1
        for the density to be integrable.
    sigma1, sigma2 : float
        Peak width below/above the peak frequency. Fixed constants, not
        fitted; defaults 0.07 and 0.09.
    s : float
        Spectral shape exponent of the exponential core. Fixed; default 4.
    smoothing : float or None
        If set, replaces the step width profile by a smooth arctan blend
        with this steepness (must be > 0). None keeps the step profile.
    """

    alpha: float
    omega_p: float
    gamma: float
    r: float
    sigma1: float = 0.07
    sigma2: float = 0.09
    s: float = 4.0
    smoothing: float | None = None

    def __post_init__(self) -> None:
        if not (np.isfinite(self.alpha) and self.alpha > 0):
            raise DomainError(f"alpha must be positive and finite, got {self.alpha}")
        if not (np.isfinite(self.omega_p) and self.omega_p > 0):
            raise DomainError(f"omega_p must be positive and finite, got {self.omega_p}")
        if not (np.isfinite(self.gamma) and self.gamma >= 1.0):
            raise DomainError(f"gamma must be >= 1, got {self.gamma}")
        if not (np.isfinite(self.r) and self.r > 1.0):
            raise DomainError(f"r must be > 1, got {self.r}")
        if self.sigma1 <= 0 or self.sigma2 <= 0:
            raise DomainError("sigma1 and sigma2 must be positive")
        if self.s <= 0:
            raise DomainError("s must be positive")
        if self.smoothing is not None and not (
            np.isfinite(self.smoothing) and self.smoothing > 0
        ):
            raise DomainError(f"smoothing must be positive, got {self.smoothing}")

    def free_vector(self) -> np.ndarray:
        """The fitted parameters (alpha, omega_p, gamma, r) as an array."""
        return np.array([self.alpha, self.omega_p, self.gamma, self.r])

    def with_free(self, vector) -> "WaveParams":
        """Copy with the four free parameters replaced by ``vector``."""
        alpha, omega_p, gamma, r = (float(v) for v in vector)
        return dataclasses.replace(
            self, alpha=alpha, omega_p=omega_p, gamma=gamma, r=r
        )


def _width(abs_omega: np.ndarray, params: WaveParams) -> np.ndarray:
    """Peak width profile evaluated at |omega|: step or arctan blend."""
    if params.smoothing is None:
        return np.where(abs_omega <= params.omega_p, params.sigma1, params.sigma2)
    blend = 0.5 + np.arctan(params.smoothing * (abs_omega - params.omega_p)) / np.pi
    return params.sigma1 + (params.sigma2 - params.sigma1) * blend


def _density_positive(abs_omega: np.ndarray, params: WaveParams, log_omega=None):
    """Density and factor intermediates on strictly positive |omega|.

    ``log_omega`` may be supplied precomputed (hot loops evaluate on a fixed
    frequency grid). Returns (density, log_omega, ratio_pow, delta, sigma)
    with ratio_pow = (|omega|/omega_p)^(-s) and delta the Gaussian peak
    exponent. Evaluated in log space so the deep low-frequency tail
    underflows cleanly to 0.
    """
    sigma = _width(abs_omega, params)
    if log_omega is None:
        log_omega = np.log(abs_omega)
    with np.errstate(over="ignore", under="ignore"):
        ratio_pow = np.exp(-params.s * (log_omega - np.log(params.omega_p)))
        delta = np.exp(
            -0.5 * ((abs_omega / params.omega_p - 1.0) / sigma) ** 2
        )
        log_density = (
            np.log(params.alpha / 2.0)
            - params.r * log_omega
            - (params.r / params.s) * ratio_pow
            + delta * np.log(params.gamma)
        )
        density = np.exp(log_density)
    return density, log_omega, ratio_pow, delta, sigma


def _gradient_positive(abs_omega: np.ndarray, params: WaveParams, log_omega=None):
    """Density and its (4, n) parameter gradient on strictly positive |omega|."""
    density, log_w, ratio_pow, delta, sigma = _density_positive(
        abs_omega, params, log_omega
    )
    log_gamma = np.log(params.gamma)
    fac_alpha = np.full_like(density, 1.0 / params.alpha)
    fac_omega_p = (
        delta * log_gamma * abs_omega * (abs_omega - params.omega_p)
        / (sigma**2 * params.omega_p**3)
        - (params.r / params.omega_p) * ratio_pow
    )
    if params.smoothing is not None:
        # The arctan width depends on omega_p, so its movement adds a
        # chain-rule term absent from the step-profile form.
        c = params.smoothing
        dsigma = -(params.sigma2 - params.sigma1) * c / (
            np.pi * (1.0 + (c * (abs_omega - params.omega_p)) ** 2)
        )
        fac_omega_p = fac_omega_p + (
            log_gamma * delta * (abs_omega / params.omega_p - 1.0) ** 2 / sigma**3
        ) * dsigma
    fac_gamma = delta / params.gamma
    fac_r = -log_w - ratio_pow / params.s
    grad = np.empty((4,) + density.shape)
    with np.errstate(invalid="ignore"):
        for i, fac in enumerate((fac_alpha, fac_omega_p, fac_gamma, fac_r)):
            grad[i] = np.where(density > 0, density * fac, 0.0)
    return density, grad


def spectral_density(omega, params: WaveParams):
    """Two-sided generalized JONSWAP density at angular frequency ``omega``.

    Parameters
    ----------
    omega : float or array-like
        Angular frequency, rad/s. May be negative; the density is even.
    params : WaveParams

    Returns
    -------
    float or ndarray
        Density in m^2 s/rad; exactly 0 at omega = 0, and 0 wherever the
        exponential core underflows (the deep low-frequency tail).
    """
    omega_arr = np.asarray(omega, dtype=float)
    abs_omega = np.abs(omega_arr)
    out = np.zeros_like(abs_omega)
    positive = abs_omega > 0
    if np.any(positive):
        density, *_ = _density_positive(abs_omega[positive], params)
        out[positive] = density
    if omega_arr.ndim == 0:
        return float(out)
    return out


def spectral_density_gradient(omega, params: WaveParams) -> np.ndarray:
    """Gradient of :func:`spectral_density` in (alpha, omega_p, gamma, r).

    Each partial derivative is the density times a closed-form factor, so
    all four components vanish wherever the density itself is zero
    (including exactly at omega = 0). The extension to negative frequencies
    is even, like the density.

    Returns
    -------
    ndarray
        Shape ``(4,) + shape(omega)``; component order matches
        ``FREE_PARAM_NAMES``.
    """
    omega_arr = np.asarray(omega, dtype=float)
    abs_omega = np.atleast_1d(np.abs(omega_arr))
    out = np.zeros((4,) + abs_omega.shape)
    positive = abs_omega > 0
    if np.any(positive):
        _, grad = _gradient_positive(abs_omega[positive], params)
        for i in range(4):
            out[i][positive] = grad[i]
    return out.reshape((4,) + omega_arr.shape)
