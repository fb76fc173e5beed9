"""Model-adequacy diagnostics for fitted spectra.

Under a well-specified model the periodogram ordinate divided by its
expectation is approximately unit-mean exponential; the quantiles of those
ratios against exponential quantiles make a Q-Q diagnostic, summarized by a
Kolmogorov-Smirnov distance. A plot-ready overlay of periodogram versus
expected periodogram (linear and decibel) is also provided.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .model import WaveParams
from .nonparam import FrequencySelection, SpectralEstimate
from .sampling import QuadratureConfig, SpectralPipeline

_DB_FLOOR = 1.0e-300


@dataclass(frozen=True)
class QqTable:
    """Sorted ratio quantiles against unit-exponential quantiles."""

    empirical: np.ndarray
    reference: np.ndarray
    ks_statistic: float

    def rows(self) -> np.ndarray:
        """(n, 2) array of (empirical, reference) pairs."""
        return np.column_stack([self.empirical, self.reference])


def _exp1_ks(sorted_sample: np.ndarray) -> float:
    """Kolmogorov-Smirnov distance of a sorted sample from Exp(1)."""
    n = len(sorted_sample)
    cdf = 1.0 - np.exp(-sorted_sample)
    steps = np.arange(1, n + 1) / n
    return float(max(np.max(steps - cdf), np.max(cdf - (steps - 1.0 / n))))


def qq_ratios(
    estimate: SpectralEstimate,
    params: WaveParams,
    selection: FrequencySelection,
    quad: QuadratureConfig,
    differenced: bool = False,
) -> QqTable:
    """Q-Q table of periodogram/expected-periodogram ratios at the selection.

    Ratios are sorted; reference quantiles use plotting positions
    (i - 0.5)/n of the unit exponential.
    """
    if estimate.scheme != selection.scheme:
        raise DomainError("estimate and selection are on different grids")
    pipeline = SpectralPipeline(selection.scheme, quad, differenced=differenced)
    expected = pipeline.expected(params)[selection.fft_indices]
    if np.any(expected <= 0) or not np.all(np.isfinite(expected)):
        raise DomainError(
            "expected periodogram vanishes on the selection; exclude those frequencies"
        )
    ratios = np.sort(estimate.values[selection.fft_indices] / expected)
    n = len(ratios)
    positions = (np.arange(1, n + 1) - 0.5) / n
    reference = -np.log1p(-positions)
    return QqTable(
        empirical=ratios, reference=reference, ks_statistic=_exp1_ks(ratios)
    )


def _decibel(values: np.ndarray) -> np.ndarray:
    return 10.0 * np.log10(np.maximum(values, _DB_FLOOR))


def overlay_table(
    estimate: SpectralEstimate,
    params: WaveParams,
    quad: QuadratureConfig,
    differenced: bool = False,
) -> dict[str, np.ndarray]:
    """Periodogram vs expected periodogram over positive frequencies.

    Returns plot-ready columns on linear and decibel (10*log10) scales.
    """
    scheme = estimate.scheme
    pipeline = SpectralPipeline(scheme, quad, differenced=differenced)
    expected = pipeline.expected(params)
    positive = np.arange(1, scheme.n // 2 + 1)
    omega = positive * (2.0 * np.pi / (scheme.n * scheme.delta))
    obs = estimate.values[positive]
    model = expected[positive]
    return {
        "omega": omega,
        "periodogram": obs,
        "expected_periodogram": model,
        "periodogram_db": _decibel(obs),
        "expected_periodogram_db": _decibel(model),
    }
