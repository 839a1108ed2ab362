"""Closed-form power spectral densities of the modulated streams.

Every analytic curve is a weighted comb of squared Dirichlet kernels

    D2_N(x) = sin(pi*x)^2 / (N * sin(pi*x/N))^2,

period ``N``, peak value 1 at multiples of ``N``, times the interpolation
filter's squared response.  For an OTFS stream the kernel argument is
``k - f*M*N*T`` with per-subcarrier weights ``mean_l sigma2[l, k] / T``;
for OFDM it is ``k - f*N*T`` with the same weights; CEP component ``l``
uses the OTFS argument with weights ``sigma2[l, k] / (M*T)``, so the M
component curves sum exactly to the OTFS curve.  With the Dirac-delta
filter the OTFS curve is periodic in ``f`` with period ``1/(M*T)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict

import numpy as np

from .dac import InterpolationFilter, filter_response_sq
from .errors import ConfigurationError
from .waveform import VarianceProfile

__all__ = [
    "PsdCurve",
    "dirichlet_sq",
    "otfs_psd",
    "ofdm_psd",
    "cep_ofdm_psd",
]

#: |x mod N| below this counts as the removable singularity -> value 1.
_SINGULARITY_EPS = 1e-9


def dirichlet_sq(num_doppler: int, x) -> np.ndarray:
    """Squared Dirichlet kernel D2_N(x), clamped to [0, 1 + 1e-12].

    The removable singularity at x = 0 (mod N) is detected within 1e-9 of
    the nearest multiple and returns the peak value 1 exactly.
    """
    if num_doppler < 1:
        raise ValueError(f"kernel size must be >= 1, got {num_doppler}")
    n = num_doppler
    x = np.asarray(x, dtype=np.float64)
    r = np.mod(x, n)
    near_peak = (r < _SINGULARITY_EPS) | (n - r < _SINGULARITY_EPS)
    safe = np.where(near_peak, 0.25 * n, r)  # any argument away from the zeros
    num = np.sin(np.pi * safe) ** 2
    den = (n * np.sin(np.pi * safe / n)) ** 2
    out = np.where(near_peak, 1.0, num / den)
    return np.clip(out, 0.0, 1.0 + 1e-12)


@dataclass(frozen=True)
class PsdCurve:
    """PSD samples on an increasing frequency grid.

    ``normalization`` is ``"absolute"`` for raw formula/estimator output or
    ``"peak_one"`` after dividing by the curve maximum.  ``meta`` carries
    free-form provenance for file headers and does not affect equality.
    """

    freqs: np.ndarray
    values: np.ndarray
    normalization: str = "absolute"
    meta: Dict[str, object] = field(default_factory=dict, compare=False)

    def __post_init__(self) -> None:
        freqs = np.asarray(self.freqs, dtype=np.float64)
        values = np.asarray(self.values, dtype=np.float64)
        if freqs.ndim != 1 or values.ndim != 1 or freqs.size != values.size:
            raise ValueError("freqs and values must be 1-D arrays of equal length")
        if freqs.size < 1:
            raise ValueError("a PSD curve needs at least one point")
        if freqs.size > 1 and not np.all(np.diff(freqs) > 0):
            raise ValueError("frequency grid must be strictly increasing")
        if not np.all(np.isfinite(values)):
            raise ValueError("PSD values must be finite")
        if self.normalization not in ("absolute", "peak_one"):
            raise ValueError(f"unknown normalization {self.normalization!r}")
        object.__setattr__(self, "freqs", freqs)
        object.__setattr__(self, "values", values)

    @property
    def num_points(self) -> int:
        return self.freqs.size

    def peak_one(self) -> "PsdCurve":
        """Scale so the maximum value is exactly 1."""
        peak = self.values.max()
        if peak <= 0:
            raise ValueError("cannot peak-normalize a curve with no positive values")
        return PsdCurve(self.freqs, self.values / peak, "peak_one", dict(self.meta))

    def restrict(self, f_lo: float, f_hi: float) -> "PsdCurve":
        """Keep grid points with f_lo <= f < f_hi."""
        keep = (self.freqs >= f_lo) & (self.freqs < f_hi)
        if not np.any(keep):
            raise ValueError(f"no grid points in [{f_lo}, {f_hi})")
        return PsdCurve(self.freqs[keep], self.values[keep], self.normalization, dict(self.meta))

    def resampled_onto(self, freqs: np.ndarray) -> "PsdCurve":
        """Linear interpolation onto another grid (must lie inside this one's span)."""
        freqs = np.asarray(freqs, dtype=np.float64)
        if freqs.min() < self.freqs.min() or freqs.max() > self.freqs.max():
            raise ValueError("target grid extends beyond this curve's frequency span")
        return PsdCurve(
            freqs, np.interp(freqs, self.freqs, self.values), self.normalization, dict(self.meta)
        )


def _check_filter(filt: InterpolationFilter, sample_interval: float) -> None:
    if not (sample_interval > 0):
        raise ConfigurationError("sample_interval must be positive")
    if not np.isclose(filt.sample_interval, sample_interval, rtol=1e-12, atol=0.0):
        raise ConfigurationError(
            f"filter sample_interval {filt.sample_interval!r} does not match "
            f"requested {sample_interval!r}"
        )


def _comb(
    weights: np.ndarray,
    kernel_size: int,
    scaled_freqs: np.ndarray,
    response: np.ndarray,
) -> np.ndarray:
    k = np.arange(weights.size)[:, None]
    kernels = dirichlet_sq(kernel_size, k - scaled_freqs[None, :])
    return (weights[:, None] * kernels).sum(axis=0) * response


def _meta(profile: VarianceProfile, sample_interval: float, filt: InterpolationFilter) -> dict:
    return {
        "num_delay": profile.num_delay,
        "num_doppler": profile.num_doppler,
        "sample_interval": sample_interval,
        "filter": filt.describe(),
    }


def otfs_psd(
    profile: VarianceProfile,
    sample_interval: float,
    filt: InterpolationFilter,
    freqs: np.ndarray,
) -> PsdCurve:
    """Analytic PSD of the OTFS stream on the given frequency grid.

    Value at f: sum_k (mean_l sigma2[l,k] / T) * D2_N(k - f*M*N*T) * |G(f)|^2.
    """
    _check_filter(filt, sample_interval)
    freqs = np.asarray(freqs, dtype=np.float64)
    scale = profile.num_delay * profile.num_doppler * sample_interval
    weights = profile.per_subcarrier_power() / sample_interval
    values = _comb(weights, profile.num_doppler, freqs * scale, filter_response_sq(filt, freqs))
    return PsdCurve(freqs, values, "absolute", {**_meta(profile, sample_interval, filt), "waveform": "otfs"})


def ofdm_psd(
    profile: VarianceProfile,
    sample_interval: float,
    filt: InterpolationFilter,
    freqs: np.ndarray,
) -> PsdCurve:
    """Analytic PSD of the OFDM stream: sum_k (mean_l sigma2[l,k]/T) * D2_N(k - f*N*T) * |G(f)|^2."""
    _check_filter(filt, sample_interval)
    freqs = np.asarray(freqs, dtype=np.float64)
    scale = profile.num_doppler * sample_interval
    weights = profile.per_subcarrier_power() / sample_interval
    values = _comb(weights, profile.num_doppler, freqs * scale, filter_response_sq(filt, freqs))
    return PsdCurve(freqs, values, "absolute", {**_meta(profile, sample_interval, filt), "waveform": "ofdm"})


def cep_ofdm_psd(
    profile: VarianceProfile,
    delay_index: int,
    sample_interval: float,
    filt: InterpolationFilter,
    freqs: np.ndarray,
) -> PsdCurve:
    """Analytic PSD of CEP component l: sum_k (sigma2[l,k]/(M*T)) * D2_N(k - f*M*N*T) * |G(f)|^2.

    Summing the M component curves reproduces ``otfs_psd`` exactly.
    """
    if not 0 <= delay_index < profile.num_delay:
        raise IndexError(
            f"delay_index must be in [0, {profile.num_delay}), got {delay_index}"
        )
    _check_filter(filt, sample_interval)
    freqs = np.asarray(freqs, dtype=np.float64)
    scale = profile.num_delay * profile.num_doppler * sample_interval
    weights = profile.sigma2[delay_index] / (profile.num_delay * sample_interval)
    values = _comb(weights, profile.num_doppler, freqs * scale, filter_response_sq(filt, freqs))
    meta = {**_meta(profile, sample_interval, filt), "waveform": "cep_ofdm", "delay_index": delay_index}
    return PsdCurve(freqs, values, "absolute", meta)
