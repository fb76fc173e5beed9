"""Non-parametric spectral estimators and Fourier-frequency selection.

Grid indexing convention: signed index j runs over -ceil(n/2)+1 .. floor(n/2)
with angular frequency 2*pi*j/(n*delta); index j maps to FFT output position
j mod n. Selections are stored as sorted signed indices.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError, DomainError
from .sampling import SamplingScheme, TimeSeries


def signed_indices(n: int) -> np.ndarray:
    """Signed Fourier indices -ceil(n/2)+1 .. floor(n/2) in ascending order."""
    return np.arange(-((n + 1) // 2) + 1, n // 2 + 1)


def fourier_frequencies(scheme: SamplingScheme, order: str = "signed") -> np.ndarray:
    """The n Fourier frequencies 2*pi*j/(n*delta) in rad/s.

    ``order="signed"`` lists them by ascending signed index (Nyquist last for
    even n); ``order="fft"`` matches FFT output order.
    """
    n = scheme.n
    step = 2.0 * np.pi / (n * scheme.delta)
    if order == "signed":
        return signed_indices(n) * step
    if order == "fft":
        return 2.0 * np.pi * np.fft.fftfreq(n, d=scheme.delta)
    raise ConfigurationError(f"unknown frequency order {order!r}")


@dataclass(frozen=True)
class FrequencySelection:
    """Subset of Fourier-grid indices entering an objective function.

    ``indices`` are signed grid indices, sorted ascending. Band selections
    built by :func:`select_frequencies` are symmetric under j -> -j except
    for the (unpaired) Nyquist index of an even grid.
    """

    indices: np.ndarray
    scheme: SamplingScheme

    def __post_init__(self) -> None:
        idx = np.asarray(self.indices, dtype=int)
        object.__setattr__(self, "indices", idx)
        if idx.ndim != 1 or len(idx) == 0:
            raise ConfigurationError("frequency selection is empty")
        if len(np.unique(idx)) != len(idx) or np.any(np.diff(idx) <= 0):
            raise ConfigurationError("selection indices must be sorted and unique")
        n = self.scheme.n
        if idx[0] < -((n + 1) // 2) + 1 or idx[-1] > n // 2:
            raise DomainError("selection indices outside the Fourier grid")

    def __len__(self) -> int:
        return len(self.indices)

    @property
    def omegas(self) -> np.ndarray:
        """Selected angular frequencies, rad/s, ascending with index."""
        return self.indices * (2.0 * np.pi / (self.scheme.n * self.scheme.delta))

    @property
    def fft_indices(self) -> np.ndarray:
        """Positions of the selected frequencies in FFT output order."""
        return np.mod(self.indices, self.scheme.n)

    @property
    def mirror_fft_indices(self) -> np.ndarray:
        """FFT positions of the sign-mirrored frequencies -j."""
        return np.mod(-self.indices, self.scheme.n)

    def band(self) -> tuple[float, float]:
        """Smallest and largest selected |omega|."""
        abs_omega = np.abs(self.omegas)
        return float(abs_omega.min()), float(abs_omega.max())


def select_frequencies(
    scheme: SamplingScheme,
    omega_min: float = 0.0,
    omega_max: float = np.inf,
    drop_zero_nyquist: bool = True,
) -> FrequencySelection:
    """Keep grid indices with omega_min <= |omega_j| <= omega_max.

    The zero and (even-n) Nyquist indices are dropped by default: the
    distributional approximations behind the spectral likelihoods fail
    there. Raises if the band empties the grid.
    """
    if omega_min < 0 or omega_max < omega_min:
        raise ConfigurationError("need 0 <= omega_min <= omega_max")
    idx = signed_indices(scheme.n)
    omega = idx * (2.0 * np.pi / (scheme.n * scheme.delta))
    keep = (np.abs(omega) >= omega_min) & (np.abs(omega) <= omega_max)
    if drop_zero_nyquist:
        keep &= idx != 0
        if scheme.n % 2 == 0:
            keep &= idx != scheme.n // 2
    if not np.any(keep):
        raise ConfigurationError(
            f"no Fourier frequencies in band [{omega_min}, {omega_max}]"
        )
    return FrequencySelection(idx[keep], scheme)


@dataclass(frozen=True)
class SpectralEstimate:
    """Non-parametric density estimate on a Fourier grid, FFT output order."""

    values: np.ndarray
    scheme: SamplingScheme
    kind: str

    def __post_init__(self) -> None:
        values = np.asarray(self.values, dtype=float)
        object.__setattr__(self, "values", values)
        if len(values) != self.scheme.n:
            raise DomainError("estimate length does not match its grid")

    @property
    def omegas_fft(self) -> np.ndarray:
        return fourier_frequencies(self.scheme, order="fft")


def periodogram(x: TimeSeries) -> SpectralEstimate:
    """Periodogram delta/(2*pi*n) |FFT|^2 of the mean-removed record.

    The sample mean is always subtracted first; on the Fourier grid this
    changes only the zero-frequency ordinate. Estimates the density of the
    sampled (aliased) process, not the continuous-frequency one.
    """
    if x.n < 2:
        raise DomainError("periodogram needs at least 2 samples")
    demeaned = x.values - x.values.mean()
    spec = np.abs(np.fft.fft(demeaned)) ** 2
    return SpectralEstimate(
        x.delta / (2.0 * np.pi * x.n) * spec, x.scheme, kind="periodogram"
    )


def default_segment_len(delta: float) -> int:
    """Segment length giving a fixed spectral resolution of 0.2*pi rad/s."""
    return int(round(100.0 / delta))


def bartlett(x: TimeSeries, segment_len: int) -> SpectralEstimate:
    """Average of periodograms over non-overlapping unwindowed segments.

    The record is mean-removed once, split into floor(n/L) segments of
    length L, and trailing remainder samples are discarded. The estimate
    lives on the length-L Fourier grid.
    """
    length = int(segment_len)
    if length < 2:
        raise ConfigurationError(f"segment length must be >= 2, got {segment_len}")
    if length > x.n:
        raise ConfigurationError(
            f"segment length {length} exceeds record length {x.n}"
        )
    n_segments = x.n // length
    demeaned = x.values - x.values.mean()
    segments = demeaned[: n_segments * length].reshape(n_segments, length)
    spec = np.abs(np.fft.fft(segments, axis=1)) ** 2
    values = x.delta / (2.0 * np.pi * length) * spec.mean(axis=0)
    return SpectralEstimate(
        values, SamplingScheme(delta=x.delta, n=length), kind="bartlett"
    )
