"""Shared fixtures: the canonical sea state of the simulation studies."""

import numpy as np
import pytest

from wavespec import (
    QuadratureConfig,
    SamplingScheme,
    WaveParams,
    default_quadrature,
)

CANONICAL_DELTA = 0.78125  # 1.28 Hz
CANONICAL_N = 2304  # half an hour


@pytest.fixture(scope="session")
def canonical_params() -> WaveParams:
    return WaveParams(alpha=0.7, omega_p=0.7, gamma=3.3, r=4.0)


@pytest.fixture(scope="session")
def canonical_scheme() -> SamplingScheme:
    return SamplingScheme(delta=CANONICAL_DELTA, n=CANONICAL_N)


@pytest.fixture(scope="session")
def canonical_quad(canonical_scheme, canonical_params) -> QuadratureConfig:
    return default_quadrature(canonical_scheme, canonical_params)


def central_difference(func, params: WaveParams, index: int, rel_step: float = 1e-6):
    """Central finite difference of func(params) in free parameter ``index``."""
    free = params.free_vector()
    step = rel_step * abs(free[index])
    up = free.copy()
    up[index] += step
    down = free.copy()
    down[index] -= step
    return (np.asarray(func(params.with_free(up))) - np.asarray(func(params.with_free(down)))) / (
        2.0 * step
    )


def gradient_scale_error(analytic: np.ndarray, approx: np.ndarray) -> float:
    """Max deviation relative to the gradient's own scale.

    Pointwise relative error is meaningless where a component underflows
    (the difference quotient is then pure cancellation noise); normalizing
    by the component's sup over the evaluation set keeps the check exact at
    healthy points and still trips on any formula error.
    """
    analytic = np.asarray(analytic)
    approx = np.asarray(approx)
    scale = max(np.max(np.abs(analytic)), np.max(np.abs(approx)), 1e-300)
    return float(np.max(np.abs(analytic - approx)) / scale)
