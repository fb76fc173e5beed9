"""Fitting objectives, initialization heuristics, and the optimizer driver.

Six estimators are provided: least squares on the periodogram (LS) or on a
Bartlett estimate (BLS), the Whittle likelihood with the continuous-
frequency or aliased model density, the de-biased Whittle likelihood built
on the expected periodogram, and exact Gaussian maximum likelihood. All are
driven by a bound-constrained simplex search on log-transformed
coordinates; the de-biased Whittle fit is polished with an analytic-score
quasi-Newton step.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg
from scipy.optimize import minimize

from .errors import ConfigurationError, DomainError, NumericalError
from .model import WaveParams, spectral_density
from .nonparam import (
    FrequencySelection,
    SpectralEstimate,
    bartlett,
    default_segment_len,
    periodogram,
    select_frequencies,
)
from .sampling import (
    DEFAULT_TAIL_THRESHOLD,
    QuadratureConfig,
    SamplingScheme,
    SpectralPipeline,
    TimeSeries,
    aliased_density,
    autocovariance,
    default_quadrature,
    difference_series,
    differencing_factor,
)

LEAST_SQUARES = "least_squares"
BARTLETT_LEAST_SQUARES = "bartlett_least_squares"
WHITTLE = "whittle"
ALIASED_WHITTLE = "aliased_whittle"
DEBIASED_WHITTLE = "debiased_whittle"
GAUSSIAN_ML = "gaussian_ml"

OBJECTIVES = (
    LEAST_SQUARES,
    BARTLETT_LEAST_SQUARES,
    WHITTLE,
    ALIASED_WHITTLE,
    DEBIASED_WHITTLE,
    GAUSSIAN_ML,
)

# Aliases accepted from CLI / service method strings.
METHOD_ALIASES = {
    "ls": LEAST_SQUARES,
    "bls": BARTLETT_LEAST_SQUARES,
    "whittle": WHITTLE,
    "aliased_whittle": ALIASED_WHITTLE,
    "aw": ALIASED_WHITTLE,
    "dw": DEBIASED_WHITTLE,
    "debiased_whittle": DEBIASED_WHITTLE,
    "ml": GAUSSIAN_ML,
    "gaussian_ml": GAUSSIAN_ML,
    "least_squares": LEAST_SQUARES,
    "bartlett_least_squares": BARTLETT_LEAST_SQUARES,
}

ALPHA_BOUNDS = (1.0e-6, 1.0e3)
GAMMA_BOUNDS = (1.0, 20.0)
R_BOUNDS = (1.1, 20.0)
GAMMA_EPS = 1.0e-8
FALLBACK_TAIL_INDEX = 4.5
DEFAULT_ML_MAX_N = 4096


@dataclass(frozen=True)
class Method:
    """Estimator choice plus its data-transform flags."""

    objective: str
    differenced: bool = False
    segment_len: int | None = None

    def __post_init__(self) -> None:
        canonical = METHOD_ALIASES.get(self.objective)
        if canonical is None:
            raise ConfigurationError(
                f"unknown method {self.objective!r}; choose from {sorted(set(METHOD_ALIASES))}"
            )
        object.__setattr__(self, "objective", canonical)
        if self.segment_len is not None and self.segment_len < 2:
            raise ConfigurationError("segment_len must be >= 2")


@dataclass(frozen=True)
class OptimizerConfig:
    """Simplex-search tolerances and the optional gradient polish step."""

    max_iterations: int = 2000
    objective_rel_tol: float = 1.0e-8
    simplex_tol: float = 1.0e-6
    polish: bool = True
    polish_max_iterations: int = 60


@dataclass(frozen=True)
class InitialGuess:
    """Heuristic starting point; flags when the tail regression degenerated."""

    params: WaveParams
    tail_fallback: bool = False


@dataclass(frozen=True)
class FitResult:
    """Outcome of one bound-constrained fit."""

    params: WaveParams
    method: Method
    objective: float
    selection: FrequencySelection
    converged: bool
    iterations: int
    init: WaveParams
    init_fallback: bool
    quad: QuadratureConfig


def _whittle_sum(model_vals: np.ndarray, estimate_vals: np.ndarray) -> float:
    """Negative-entropy spectral likelihood; -inf when the model touches zero."""
    if not np.all(np.isfinite(model_vals)) or np.any(model_vals <= 0.0):
        return -np.inf
    return float(-np.sum(np.log(model_vals) + estimate_vals / model_vals))


def _model_at_selection(
    params: WaveParams,
    selection: FrequencySelection,
    aliased: bool,
    differenced: bool,
    quad: QuadratureConfig | None,
) -> np.ndarray:
    omegas = selection.omegas
    if aliased:
        if quad is None:
            raise ConfigurationError("aliased model values need a quadrature config")
        return aliased_density(
            omegas, params, selection.scheme, quad, differenced=differenced
        )
    vals = spectral_density(omegas, params)
    if differenced:
        vals = vals * differencing_factor(omegas, selection.scheme.delta)
    return vals


def objective_least_squares(
    params: WaveParams,
    estimate: SpectralEstimate,
    selection: FrequencySelection,
    model_kind: str = "continuous",
    differenced: bool = False,
    quad: QuadratureConfig | None = None,
) -> float:
    """Sum of squared distances between model density and estimate (minimize).

    ``model_kind="continuous"`` is the conventional curve fit against the
    continuous-frequency density; ``"aliased"`` swaps in the folded density.
    """
    if model_kind not in ("continuous", "aliased"):
        raise ConfigurationError(f"unknown model_kind {model_kind!r}")
    model = _model_at_selection(
        params, selection, model_kind == "aliased", differenced, quad
    )
    resid = model - estimate.values[selection.fft_indices]
    return float(np.sum(resid**2))


def objective_whittle(
    params: WaveParams,
    estimate: SpectralEstimate,
    selection: FrequencySelection,
    aliased: bool = False,
    differenced: bool = False,
    quad: QuadratureConfig | None = None,
) -> float:
    """Whittle spectral log-likelihood (maximize); aliased flag folds the model."""
    model = _model_at_selection(params, selection, aliased, differenced, quad)
    return _whittle_sum(model, estimate.values[selection.fft_indices])


def objective_debiased_whittle(
    params: WaveParams,
    estimate: SpectralEstimate,
    selection: FrequencySelection,
    quad: QuadratureConfig,
    differenced: bool = False,
    pipeline: SpectralPipeline | None = None,
) -> float:
    """De-biased Whittle log-likelihood: the model is the expected periodogram."""
    if pipeline is None:
        pipeline = SpectralPipeline(selection.scheme, quad, differenced=differenced)
    expected = pipeline.expected(params)
    return _whittle_sum(
        expected[selection.fft_indices], estimate.values[selection.fft_indices]
    )


def objective_gaussian_ml(
    params: WaveParams,
    x: TimeSeries,
    quad: QuadratureConfig,
    differenced: bool = False,
    ml_max_n: int = DEFAULT_ML_MAX_N,
) -> float:
    """Exact mean-zero Gaussian log-likelihood with the model Toeplitz covariance.

    ``differenced`` means ``x`` is already a first-differenced record and the
    covariance is built from the differenced model density. Costs a dense
    triangular factorization, so the record length is capped at ``ml_max_n``.
    """
    n = x.n
    if n > ml_max_n:
        raise ConfigurationError(
            f"record length {n} exceeds ml_max_n={ml_max_n} for exact likelihood"
        )
    acf = autocovariance(params, x.scheme, quad, differenced=differenced).values
    cov = scipy.linalg.toeplitz(acf)
    try:
        factor = scipy.linalg.cho_factor(cov, lower=True)
    except scipy.linalg.LinAlgError:
        jitter = 1.0e-10 * acf[0]
        try:
            factor = scipy.linalg.cho_factor(
                cov + jitter * np.eye(n), lower=True
            )
        except scipy.linalg.LinAlgError as exc:
            raise NumericalError(
                "model covariance is not positive definite even after jitter"
            ) from exc
    log_det = 2.0 * float(np.sum(np.log(np.diag(factor[0]))))
    quad_form = float(x.values @ scipy.linalg.cho_solve(factor, x.values))
    return 0.5 * (-n * np.log(2.0 * np.pi) - log_det - quad_form)


def initialize(x: TimeSeries, selection: FrequencySelection) -> InitialGuess:
    """Heuristic starting parameters from the periodogram of ``x``.

    Peak frequency from the periodogram argmax over the selection (ties to
    the lowest frequency); tail index from a log-log regression over the
    frequencies closer to the Nyquist than the peak (fallback 4.5 when the
    regression is degenerate or lands outside any plausible decay); peak
    enhancement fixed at 3; scale matched so the rectangle-rule areas of
    model and periodogram agree over the selection.
    """
    if selection.scheme != x.scheme:
        raise ConfigurationError("selection grid does not match the record")
    return initialize_from_estimate(periodogram(x), selection)


def initialize_from_estimate(
    estimate: SpectralEstimate, selection: FrequencySelection
) -> InitialGuess:
    """:func:`initialize` applied to an already-computed spectral estimate."""
    if selection.scheme != estimate.scheme:
        raise ConfigurationError("selection grid does not match the estimate")
    vals = estimate.values[selection.fft_indices]
    omegas = selection.omegas
    pos = omegas > 0
    if not np.any(pos):
        raise ConfigurationError("selection has no positive frequencies")
    pos_omega = omegas[pos]
    pos_vals = vals[pos]
    omega_p0 = float(pos_omega[np.argmax(pos_vals)])

    nyquist = estimate.scheme.nyquist
    tail = (pos_omega > 0.5 * (omega_p0 + nyquist)) & (pos_vals > 0)
    fallback = True
    r0 = FALLBACK_TAIL_INDEX
    if tail.sum() >= 2:
        slope = np.polyfit(np.log(pos_omega[tail]), np.log(pos_vals[tail]), 1)[0]
        # A slope outside any plausible tail decay means the regression ran
        # on noise; starting the optimizer there strands it in a bad basin.
        if 1.5 <= -slope <= R_BOUNDS[1]:
            r0 = -float(slope)
            fallback = False
    r0 = float(np.clip(r0, R_BOUNDS[0], R_BOUNDS[1]))

    unit_scale = WaveParams(1.0, omega_p0, 3.0, r0)
    denom = float(np.sum(spectral_density(omegas, unit_scale)))
    alpha0 = float(vals.sum() / denom) if denom > 0 else 1.0
    alpha0 = float(np.clip(alpha0, ALPHA_BOUNDS[0], ALPHA_BOUNDS[1]))
    return InitialGuess(WaveParams(alpha0, omega_p0, 3.0, r0), fallback)


def _to_search_space(free: np.ndarray) -> np.ndarray:
    return np.array(
        [
            np.log(free[0]),
            np.log(free[1]),
            np.log(free[2] - 1.0 + GAMMA_EPS),
            np.log(free[3] - 1.0),
        ]
    )


def _from_search_space(u: np.ndarray) -> np.ndarray:
    return np.array(
        [
            np.exp(u[0]),
            np.exp(u[1]),
            1.0 - GAMMA_EPS + np.exp(u[2]),
            1.0 + np.exp(u[3]),
        ]
    )


def _clip_free(free: np.ndarray, bounds: list[tuple[float, float]]) -> np.ndarray:
    lo = np.array([b[0] for b in bounds])
    hi = np.array([b[1] for b in bounds])
    return np.minimum(np.maximum(free, lo), hi)


def fit(
    x: TimeSeries,
    method: Method,
    band: tuple[float, float] = (0.0, np.inf),
    selection: FrequencySelection | None = None,
    quad: QuadratureConfig | None = None,
    optimizer: OptimizerConfig | None = None,
    init: WaveParams | None = None,
    ml_max_n: int = DEFAULT_ML_MAX_N,
    quad_m: int | None = None,
    quad_k: int | None = None,
    tail_threshold: float | None = None,
    smoothing: float | None = None,
) -> FitResult:
    """Bound-constrained fit of the wave-spectrum parameters to a record.

    The record is mean-removed, optionally first-differenced, reduced to the
    method's spectral estimate, and the chosen objective is optimized by a
    Nelder-Mead search on log-transformed coordinates within the parameter
    box (scale in [1e-6, 1e3], peak frequency between the first selected
    frequency and the Nyquist, enhancement in [1, 20], tail index in
    [1.1, 20]). De-biased Whittle fits get a final quasi-Newton polish using
    the analytic score. Estimated parameters always refer to the original
    (undifferenced) process.

    Parameters
    ----------
    x : TimeSeries
    method : Method
    band : (omega_min, omega_max)
        Frequency band used to build the selection when ``selection`` is not
        given; zero and Nyquist are always dropped.
    selection : FrequencySelection, optional
        Explicit selection on the working grid (the differenced grid when
        ``method.differenced``, the Bartlett segment grid for BLS). Fixed
        before optimization.
    quad, optimizer, init, ml_max_n, quad_m, quad_k, tail_threshold, smoothing :
        Overrides for quadrature (whole config or its individual fields),
        optimizer tolerances, the starting point, the exact-likelihood size
        cap, and the smoothed-width steepness. The fold count is resolved
        once at the initial guess and held fixed during optimization.
    """
    optimizer = optimizer or OptimizerConfig()
    demeaned = x.demeaned()
    working = difference_series(demeaned) if method.differenced else demeaned

    estimate: SpectralEstimate | None
    if method.objective == BARTLETT_LEAST_SQUARES:
        segment_len = method.segment_len or default_segment_len(working.delta)
        estimate = bartlett(working, segment_len)
    elif method.objective == GAUSSIAN_ML:
        estimate = None
    else:
        estimate = periodogram(working)
    working_scheme = estimate.scheme if estimate is not None else working.scheme

    if selection is None:
        selection = select_frequencies(working_scheme, band[0], band[1])
    elif selection.scheme != working_scheme:
        raise ConfigurationError(
            "selection grid does not match the working record "
            f"(selection n={selection.scheme.n}, working n={working_scheme.n})"
        )
    sel_band = selection.band()

    init_fallback = False
    if init is None:
        init_selection = select_frequencies(demeaned.scheme, sel_band[0], sel_band[1])
        guess = initialize(demeaned, init_selection)
        init = guess.params
        init_fallback = guess.tail_fallback
    if smoothing is not None:
        init = WaveParams(
            init.alpha, init.omega_p, init.gamma, init.r,
            init.sigma1, init.sigma2, init.s, smoothing,
        )

    if quad is None:
        quad = default_quadrature(
            working.scheme,
            init,
            m=quad_m,
            k_folds=quad_k,
            tail_threshold=(
                tail_threshold if tail_threshold is not None else DEFAULT_TAIL_THRESHOLD
            ),
        )

    nyquist = working_scheme.nyquist
    bounds = [
        ALPHA_BOUNDS,
        (sel_band[0], nyquist),
        GAMMA_BOUNDS,
        R_BOUNDS,
    ]
    init_free = _clip_free(init.free_vector(), bounds)
    init = init.with_free(init_free)

    pipeline = (
        SpectralPipeline(working_scheme, quad, differenced=method.differenced)
        if method.objective == DEBIASED_WHITTLE
        else None
    )
    sel_idx = selection.fft_indices
    est_vals = estimate.values[sel_idx] if estimate is not None else None

    def score(params: WaveParams) -> float:
        """Objective in always-maximize orientation."""
        if method.objective == LEAST_SQUARES:
            return -objective_least_squares(
                params, estimate, selection, differenced=method.differenced
            )
        if method.objective == BARTLETT_LEAST_SQUARES:
            return -objective_least_squares(
                params, estimate, selection, differenced=method.differenced
            )
        if method.objective == WHITTLE:
            model = _model_at_selection(
                params, selection, False, method.differenced, quad
            )
            return _whittle_sum(model, est_vals)
        if method.objective == ALIASED_WHITTLE:
            model = _model_at_selection(
                params, selection, True, method.differenced, quad
            )
            return _whittle_sum(model, est_vals)
        if method.objective == DEBIASED_WHITTLE:
            expected = pipeline.expected(params)
            return _whittle_sum(expected[sel_idx], est_vals)
        return objective_gaussian_ml(
            params, working, quad, differenced=method.differenced, ml_max_n=ml_max_n
        )

    score_init = score(init)
    if not np.isfinite(score_init):
        raise NumericalError(
            f"objective is not finite at the initial guess {init}; "
            "narrow the frequency band or supply a different init"
        )

    u_bounds = [
        (np.log(ALPHA_BOUNDS[0]), np.log(ALPHA_BOUNDS[1])),
        (np.log(sel_band[0]), np.log(nyquist)),
        (np.log(GAMMA_EPS), np.log(GAMMA_BOUNDS[1] - 1.0 + GAMMA_EPS)),
        (np.log(R_BOUNDS[0] - 1.0), np.log(R_BOUNDS[1] - 1.0)),
    ]

    def negative(u: np.ndarray) -> float:
        params = init.with_free(_clip_free(_from_search_space(u), bounds))
        value = score(params)
        return -value if np.isfinite(value) else np.inf

    result = minimize(
        negative,
        _to_search_space(init_free),
        method="Nelder-Mead",
        bounds=u_bounds,
        options={
            "maxiter": optimizer.max_iterations,
            "xatol": optimizer.simplex_tol,
            "fatol": optimizer.objective_rel_tol * (1.0 + abs(score_init)),
            "disp": False,
        },
    )
    best_free = _clip_free(_from_search_space(result.x), bounds)
    best_value = -float(result.fun)
    iterations = int(result.nit)
    converged = bool(result.success)

    if method.objective == DEBIASED_WHITTLE and optimizer.polish:
        polished = _polish_debiased(
            init, best_free, bounds, pipeline, sel_idx, est_vals, optimizer
        )
        if polished is not None:
            free2, value2, nit2 = polished
            iterations += nit2
            if value2 > best_value:
                best_free, best_value = free2, value2

    if best_value < score_init:
        best_free, best_value = init_free, score_init

    best_params = init.with_free(best_free)
    objective = (
        -best_value
        if method.objective in (LEAST_SQUARES, BARTLETT_LEAST_SQUARES)
        else best_value
    )
    return FitResult(
        params=best_params,
        method=method,
        objective=float(objective),
        selection=selection,
        converged=converged,
        iterations=iterations,
        init=init,
        init_fallback=init_fallback,
        quad=quad,
    )


def _polish_debiased(
    template: WaveParams,
    start_free: np.ndarray,
    bounds: list[tuple[float, float]],
    pipeline: SpectralPipeline,
    sel_idx: np.ndarray,
    est_vals: np.ndarray,
    optimizer: OptimizerConfig,
):
    """Quasi-Newton refinement of a de-biased Whittle optimum (analytic score)."""

    def negative_with_grad(free: np.ndarray):
        params = template.with_free(_clip_free(free, bounds))
        expected, grads = pipeline.expected_and_gradient(params)
        model = expected[sel_idx]
        if not np.all(np.isfinite(model)) or np.any(model <= 0.0):
            return 1.0e300, np.zeros(4)
        value = -np.sum(np.log(model) + est_vals / model)
        weight = 1.0 / model - est_vals / model**2
        grad = -(grads[:, sel_idx] @ weight)
        return -float(value), -grad

    try:
        result = minimize(
            negative_with_grad,
            start_free,
            jac=True,
            method="L-BFGS-B",
            bounds=bounds,
            options={"maxiter": optimizer.polish_max_iterations},
        )
    except (ValueError, FloatingPointError):
        return None
    free = _clip_free(result.x, bounds)
    return free, -float(result.fun), int(result.nit)
