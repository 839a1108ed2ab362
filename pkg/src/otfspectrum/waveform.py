"""Delay-Doppler grids and the time-domain modulators built on them.

Sample-layout conventions used throughout the package
-----------------------------------------------------

A grid ``X`` has shape ``(num_delay, num_doppler)``; row ``l`` is a delay
bin, column ``k`` a Doppler (equivalently, subcarrier) bin.  With
``M = num_delay`` and ``N = num_doppler``:

* the OTFS frame interleaves delay bins at sample stride ``M``: sample
  ``n*M + l`` carries the inverse-DFT value of row ``l`` at time index
  ``n``.  Equivalently ``s = kron(conj(F).T, I_M) @ vec(X)`` with ``F``
  the unitary DFT matrix of size ``N`` and ``vec`` column-major.
* the OFDM frame concatenates the rows instead: sample ``l*N + n`` holds
  the same inverse-DFT value, i.e. ``M`` independent ``N``-point
  multicarrier symbols back to back.
* the constant-envelope-pilot (CEP) OFDM component ``l`` is the OTFS
  frame with every sample not congruent to ``l`` (mod ``M``) zeroed.
  Summing the ``M`` components reproduces the OTFS frame exactly,
  sample by sample.

Frames never carry a cyclic prefix; a frame is exactly ``M*N`` samples.
All streams are generated from a counter-based Philox generator so a
given ``(seed, frame, delay, doppler)`` bin always receives the same
draw no matter how many frames are requested.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Optional, Sequence

import numpy as np

from .errors import ConfigurationError

__all__ = [
    "DelayDopplerGrid",
    "VarianceProfile",
    "BasebandFrame",
    "FrameStream",
    "dft_matrix",
    "otfs_modulate",
    "ofdm_modulate",
    "cep_ofdm_component",
    "cep_component_stream",
    "constellation_points",
    "generate_random_stream",
    "stream_chunks",
]

#: Frames per generation chunk.  Fixed: it is part of the reproducibility
#: contract (chunk c of a given seed always holds frames [c*4096, (c+1)*4096)).
_CHUNK_FRAMES = 4096

_QPSK = np.array([1 + 1j, -1 + 1j, -1 - 1j, 1 - 1j]) / np.sqrt(2.0)
_QAM16_LEVELS = np.array([-3.0, -1.0, 1.0, 3.0])
_QAM16 = (_QAM16_LEVELS[:, None] + 1j * _QAM16_LEVELS[None, :]).ravel() / np.sqrt(10.0)


def dft_matrix(size: int) -> np.ndarray:
    """Unitary DFT matrix with entry (a, b) = exp(-2j*pi*a*b/size)/sqrt(size)."""
    if size < 1:
        raise ValueError(f"DFT size must be >= 1, got {size}")
    a = np.arange(size)
    return np.exp(-2j * np.pi * np.outer(a, a) / size) / np.sqrt(size)


@dataclass(frozen=True)
class DelayDopplerGrid:
    """Complex symbol grid of shape (num_delay, num_doppler)."""

    entries: np.ndarray

    def __post_init__(self) -> None:
        entries = np.asarray(self.entries, dtype=np.complex128)
        if entries.ndim != 2 or entries.shape[0] < 1 or entries.shape[1] < 1:
            raise ValueError(
                f"grid entries must be a 2-D array with both dims >= 1, got shape {entries.shape}"
            )
        object.__setattr__(self, "entries", entries)

    @property
    def num_delay(self) -> int:
        return self.entries.shape[0]

    @property
    def num_doppler(self) -> int:
        return self.entries.shape[1]

    def vec(self) -> np.ndarray:
        """Column-major vectorization (column k contributes entries k*M .. k*M+M-1)."""
        return self.entries.ravel(order="F")


@dataclass(frozen=True)
class VarianceProfile:
    """Per-bin symbol variances sigma2[l, k] >= 0 on a delay-Doppler grid."""

    sigma2: np.ndarray

    def __post_init__(self) -> None:
        sigma2 = np.asarray(self.sigma2, dtype=np.float64)
        if sigma2.ndim != 2 or sigma2.shape[0] < 1 or sigma2.shape[1] < 1:
            raise ValueError(
                f"variance profile must be a 2-D array with both dims >= 1, got shape {sigma2.shape}"
            )
        if not np.all(np.isfinite(sigma2)) or np.any(sigma2 < 0):
            raise ValueError("variances must be finite and non-negative")
        object.__setattr__(self, "sigma2", sigma2)

    @property
    def num_delay(self) -> int:
        return self.sigma2.shape[0]

    @property
    def num_doppler(self) -> int:
        return self.sigma2.shape[1]

    def per_subcarrier_power(self) -> np.ndarray:
        """Mean variance of each Doppler/subcarrier column, averaged over delay bins."""
        return self.sigma2.mean(axis=0)

    @classmethod
    def uniform(cls, num_delay: int, num_doppler: int, power: float = 1.0) -> "VarianceProfile":
        return cls(np.full((num_delay, num_doppler), float(power)))


@dataclass(frozen=True)
class BasebandFrame:
    """One modulated frame: exactly num_delay*num_doppler complex samples."""

    samples: np.ndarray
    sample_interval: float
    num_delay: int
    num_doppler: int

    def __post_init__(self) -> None:
        samples = np.asarray(self.samples, dtype=np.complex128)
        if samples.ndim != 1:
            raise ValueError("frame samples must be a 1-D array")
        if self.num_delay < 1 or self.num_doppler < 1:
            raise ValueError("frame dimensions must be >= 1")
        if samples.size != self.num_delay * self.num_doppler:
            raise ValueError(
                f"frame must hold exactly num_delay*num_doppler = "
                f"{self.num_delay * self.num_doppler} samples, got {samples.size}"
            )
        if not (self.sample_interval > 0):
            raise ValueError("sample_interval must be positive")
        object.__setattr__(self, "samples", samples)

    @property
    def num_samples(self) -> int:
        return self.samples.size


@dataclass(frozen=True)
class FrameStream:
    """Ordered frames stacked as a (num_frames, num_delay*num_doppler) array."""

    frames: np.ndarray
    num_delay: int
    num_doppler: int
    sample_interval: float
    seed: Optional[int] = None

    def __post_init__(self) -> None:
        frames = np.asarray(self.frames, dtype=np.complex128)
        if frames.ndim != 2:
            raise ValueError("frames must be a 2-D array (num_frames, samples_per_frame)")
        if frames.shape[1] != self.num_delay * self.num_doppler:
            raise ValueError(
                f"each frame must hold num_delay*num_doppler = "
                f"{self.num_delay * self.num_doppler} samples, got {frames.shape[1]}"
            )
        if not (self.sample_interval > 0):
            raise ValueError("sample_interval must be positive")
        object.__setattr__(self, "frames", frames)

    def __len__(self) -> int:
        return self.frames.shape[0]

    @property
    def num_frames(self) -> int:
        return self.frames.shape[0]

    @property
    def samples_per_frame(self) -> int:
        return self.frames.shape[1]

    def frame(self, index: int) -> BasebandFrame:
        return BasebandFrame(
            samples=self.frames[index],
            sample_interval=self.sample_interval,
            num_delay=self.num_delay,
            num_doppler=self.num_doppler,
        )

    def concatenated(self) -> np.ndarray:
        """All frames back to back as one 1-D sample array."""
        return self.frames.reshape(-1)


def _row_inverse_dft(entries: np.ndarray) -> np.ndarray:
    # Row l, time n: (1/sqrt(N)) * sum_k X[l, k] exp(+2j*pi*k*n/N)
    return np.fft.ifft(entries, axis=-1, norm="ortho")


def otfs_modulate(grid: DelayDopplerGrid, sample_interval: float = 1.0) -> BasebandFrame:
    """Modulate a delay-Doppler grid into one OTFS frame.

    Sample ``n*M + l`` equals ``(1/sqrt(N)) * sum_k X[l, k] * exp(2j*pi*k*n/N)``:
    the delay bins are interleaved at stride ``M``, so each output sample
    advances the delay index first and the time index every ``M`` samples.
    No cyclic prefix is inserted.
    """
    if not (sample_interval > 0):
        raise ValueError("sample_interval must be positive")
    time_rows = _row_inverse_dft(grid.entries)  # (M, N)
    samples = time_rows.ravel(order="F")  # index n*M + l
    return BasebandFrame(
        samples=samples,
        sample_interval=sample_interval,
        num_delay=grid.num_delay,
        num_doppler=grid.num_doppler,
    )


def ofdm_modulate(grid: DelayDopplerGrid, sample_interval: float = 1.0) -> BasebandFrame:
    """Modulate the same grid as M back-to-back N-point multicarrier symbols.

    Sample ``l*N + n`` equals the same inverse-DFT value as the OTFS frame's
    sample ``n*M + l``; only the interleaving differs.  No cyclic prefix.
    """
    if not (sample_interval > 0):
        raise ValueError("sample_interval must be positive")
    time_rows = _row_inverse_dft(grid.entries)
    samples = time_rows.ravel(order="C")  # index l*N + n
    return BasebandFrame(
        samples=samples,
        sample_interval=sample_interval,
        num_delay=grid.num_delay,
        num_doppler=grid.num_doppler,
    )


def cep_ofdm_component(
    grid: DelayDopplerGrid, delay_index: int, sample_interval: float = 1.0
) -> BasebandFrame:
    """Zero-stuffed single-delay-bin component of the OTFS frame.

    Component ``l`` keeps the OTFS samples at positions ``n*M + l`` and is
    zero elsewhere, so ``sum_l cep_ofdm_component(X, l) == otfs_modulate(X)``
    holds exactly (each position has one non-zero summand).
    """
    num_delay = grid.num_delay
    if not 0 <= delay_index < num_delay:
        raise IndexError(
            f"delay_index must be in [0, {num_delay}), got {delay_index}"
        )
    frame = otfs_modulate(grid, sample_interval)
    samples = np.zeros_like(frame.samples)
    samples[delay_index::num_delay] = frame.samples[delay_index::num_delay]
    return BasebandFrame(
        samples=samples,
        sample_interval=sample_interval,
        num_delay=num_delay,
        num_doppler=grid.num_doppler,
    )


def cep_component_stream(stream: FrameStream, delay_index: int) -> FrameStream:
    """Per-frame CEP component of an OTFS stream (samples off the comb zeroed)."""
    if not 0 <= delay_index < stream.num_delay:
        raise IndexError(
            f"delay_index must be in [0, {stream.num_delay}), got {delay_index}"
        )
    frames = np.zeros_like(stream.frames)
    frames[:, delay_index :: stream.num_delay] = stream.frames[:, delay_index :: stream.num_delay]
    return FrameStream(
        frames=frames,
        num_delay=stream.num_delay,
        num_doppler=stream.num_doppler,
        sample_interval=stream.sample_interval,
        seed=stream.seed,
    )


def constellation_points(name: str, custom_points: Optional[Sequence[complex]] = None) -> np.ndarray:
    """Unit-average-power constellation for random streams.

    ``qpsk`` and ``qam16`` are built in; ``custom`` normalizes the caller's
    points to unit average power and requires them to be zero-mean.
    """
    key = name.lower()
    if key == "qpsk":
        return _QPSK.copy()
    if key == "qam16":
        return _QAM16.copy()
    if key == "custom":
        if custom_points is None:
            raise ConfigurationError("constellation 'custom' requires custom_points")
        pts = np.asarray(custom_points, dtype=np.complex128).ravel()
        if pts.size < 2 or not np.all(np.isfinite(pts)):
            raise ConfigurationError("custom constellation needs >= 2 finite points")
        rms = np.sqrt(np.mean(np.abs(pts) ** 2))
        if rms == 0:
            raise ConfigurationError("custom constellation has zero power")
        pts = pts / rms
        if abs(pts.mean()) > 1e-9:
            raise ConfigurationError("custom constellation must be zero-mean")
        return pts
    raise ConfigurationError(
        f"unknown constellation {name!r}; expected one of 'qpsk', 'qam16', 'custom'"
    )


def _chunk_rng(seed: int, chunk_index: int) -> np.random.Generator:
    key = np.random.SeedSequence([int(seed), int(chunk_index)]).generate_state(2, np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


def _draw_grid_symbols(
    rng: np.random.Generator,
    frames_in_chunk: int,
    sigma: np.ndarray,
    points: np.ndarray,
) -> np.ndarray:
    # One uniform double per bin, consumed in (frame, delay, doppler) C-order.
    # Index construction from doubles keeps consumption independent of the
    # constellation size; sigma == 0 bins still consume a draw but emit exact 0.
    num_delay, num_doppler = sigma.shape
    u = rng.random((_CHUNK_FRAMES, num_delay, num_doppler))[:frames_in_chunk]
    idx = (u * points.size).astype(np.intp)
    return points[idx] * sigma[None, :, :]


def stream_chunks(
    profile: VarianceProfile,
    num_frames: int,
    seed: int,
    sample_interval: float = 1.0,
    constellation: str = "qpsk",
    custom_points: Optional[Sequence[complex]] = None,
) -> Iterator[FrameStream]:
    """Yield the OTFS stream in fixed 4096-frame generation chunks.

    Concatenating the chunks is bit-identical to ``generate_random_stream``
    with the same arguments; use this to keep long oversampled runs out of
    memory.
    """
    if num_frames < 1:
        raise ConfigurationError(f"num_frames must be >= 1, got {num_frames}")
    if seed is None:
        raise ConfigurationError("a seed is required; wall-clock seeding is not supported")
    points = constellation_points(constellation, custom_points)
    sigma = np.sqrt(profile.sigma2)
    for chunk_index in range((num_frames + _CHUNK_FRAMES - 1) // _CHUNK_FRAMES):
        lo = chunk_index * _CHUNK_FRAMES
        hi = min(lo + _CHUNK_FRAMES, num_frames)
        rng = _chunk_rng(seed, chunk_index)
        symbols = _draw_grid_symbols(rng, hi - lo, sigma, points)
        time_rows = _row_inverse_dft(symbols)  # (F, M, N)
        frames = time_rows.transpose(0, 2, 1).reshape(hi - lo, -1)  # n*M + l layout
        yield FrameStream(
            frames=frames,
            num_delay=profile.num_delay,
            num_doppler=profile.num_doppler,
            sample_interval=sample_interval,
            seed=seed,
        )


def generate_random_stream(
    profile: VarianceProfile,
    num_frames: int,
    seed: int,
    sample_interval: float = 1.0,
    constellation: str = "qpsk",
    custom_points: Optional[Sequence[complex]] = None,
) -> FrameStream:
    """Generate an OTFS frame stream with i.i.d. per-bin symbols.

    Bin ``(frame, l, k)`` draws one point from the chosen unit-power
    constellation scaled by ``sqrt(sigma2[l, k])``; zero-variance bins are
    exactly zero.  Draws are indexed by ``(frame, l, k)`` within fixed
    4096-frame Philox chunks, so enlarging ``num_frames`` never changes
    earlier frames.
    """
    chunks = list(
        stream_chunks(profile, num_frames, seed, sample_interval, constellation, custom_points)
    )
    frames = chunks[0].frames if len(chunks) == 1 else np.concatenate([c.frames for c in chunks])
    return FrameStream(
        frames=frames,
        num_delay=profile.num_delay,
        num_doppler=profile.num_doppler,
        sample_interval=sample_interval,
        seed=seed,
    )
