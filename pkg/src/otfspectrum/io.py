"""File formats: CSV sample streams and PSD curves, JSON metrics and masks.

All CSV files open with ``# key=value`` header lines followed by one
column-name row; floats are written with ``repr`` so re-ingesting a file
reproduces the exact same doubles (and therefore byte-identical metric
records).  Every file written by a scenario embeds the scenario's config
hash.
"""

from __future__ import annotations

import hashlib
import json
from pathlib import Path
from typing import Dict, List, Optional, Tuple, Union

import numpy as np

from .errors import ConfigurationError
from .precoding import PrecoderSet, SpectrumMask, decompose_mask, mask_from_pass_bands
from .psd import PsdCurve
from .waveform import FrameStream

__all__ = [
    "config_hash",
    "write_frame_stream",
    "read_frame_stream",
    "write_psd_curve",
    "read_psd_curve",
    "write_metrics",
    "read_metrics",
    "load_mask",
    "write_mask",
    "write_precoder_set",
]


def config_hash(config: dict) -> str:
    """Short stable hash of a JSON-serializable configuration dict."""
    canonical = json.dumps(config, sort_keys=True, separators=(",", ":"), default=str)
    return hashlib.sha256(canonical.encode()).hexdigest()[:12]


def _write_header(handle, fields: Dict[str, object]) -> None:
    for key, value in fields.items():
        if value is not None:
            handle.write(f"# {key}={value}\n")


def _read_header(lines: List[str]) -> Tuple[Dict[str, str], int]:
    fields: Dict[str, str] = {}
    i = 0
    while i < len(lines) and lines[i].startswith("#"):
        body = lines[i][1:].strip()
        if "=" in body:
            key, _, value = body.partition("=")
            fields[key.strip()] = value.strip()
        i += 1
    return fields, i


def write_frame_stream(
    path: Union[str, Path],
    stream: FrameStream,
    extra_header: Optional[Dict[str, object]] = None,
) -> Path:
    """Interleaved re/im CSV, one sample per row, grid geometry in the header."""
    path = Path(path)
    header: Dict[str, object] = {
        "format": "otfspectrum-framestream-v1",
        "num_delay": stream.num_delay,
        "num_doppler": stream.num_doppler,
        "sample_interval": repr(stream.sample_interval),
        "num_frames": stream.num_frames,
        "seed": stream.seed,
    }
    if extra_header:
        header.update(extra_header)
    flat = stream.concatenated()
    with path.open("w") as handle:
        _write_header(handle, header)
        handle.write("re,im\n")
        for value in flat:
            handle.write(f"{float(value.real)!r},{float(value.imag)!r}\n")
    return path


def read_frame_stream(path: Union[str, Path]) -> FrameStream:
    lines = Path(path).read_text().splitlines()
    fields, start = _read_header(lines)
    try:
        num_delay = int(fields["num_delay"])
        num_doppler = int(fields["num_doppler"])
        sample_interval = float(fields["sample_interval"])
        num_frames = int(fields["num_frames"])
    except KeyError as missing:
        raise ConfigurationError(f"frame-stream file {path} lacks header field {missing}") from None
    seed = None if fields.get("seed") in (None, "None") else int(fields["seed"])
    rows = lines[start + 1 :]  # skip the column-name row
    data = np.array(
        [[float(a), float(b)] for a, b in (row.split(",") for row in rows if row)],
    )
    samples = data[:, 0] + 1j * data[:, 1]
    per_frame = num_delay * num_doppler
    if samples.size != num_frames * per_frame:
        raise ConfigurationError(
            f"frame-stream file {path} holds {samples.size} samples, "
            f"expected {num_frames}*{per_frame}"
        )
    return FrameStream(
        frames=samples.reshape(num_frames, per_frame),
        num_delay=num_delay,
        num_doppler=num_doppler,
        sample_interval=sample_interval,
        seed=seed,
    )


def write_psd_curve(
    path: Union[str, Path],
    curve: PsdCurve,
    extra_header: Optional[Dict[str, object]] = None,
) -> Path:
    """freq_hz,psd_value CSV with normalization and provenance headers."""
    path = Path(path)
    header: Dict[str, object] = {"format": "otfspectrum-psd-v1", "normalization": curve.normalization}
    for key in ("num_delay", "num_doppler", "sample_interval", "filter", "waveform",
                "segment_len", "sample_rate", "num_segments", "delay_index"):
        if key in curve.meta:
            header[key] = curve.meta[key]
    if extra_header:
        header.update(extra_header)
    with path.open("w") as handle:
        _write_header(handle, header)
        handle.write("freq_hz,psd_value\n")
        for f, v in zip(curve.freqs, curve.values):
            handle.write(f"{float(f)!r},{float(v)!r}\n")
    return path


def read_psd_curve(path: Union[str, Path]) -> PsdCurve:
    lines = Path(path).read_text().splitlines()
    fields, start = _read_header(lines)
    rows = lines[start + 1 :]
    data = np.array([[float(a), float(b)] for a, b in (row.split(",") for row in rows if row)])
    if data.size == 0:
        raise ConfigurationError(f"PSD file {path} holds no samples")
    meta: Dict[str, object] = {k: v for k, v in fields.items() if k not in ("format", "normalization")}
    return PsdCurve(
        freqs=data[:, 0],
        values=data[:, 1],
        normalization=fields.get("normalization", "absolute"),
        meta=meta,
    )


def write_metrics(path: Union[str, Path], records: List[dict]) -> Path:
    """JSON list of {metric, value, config_hash} records."""
    path = Path(path)
    for record in records:
        missing = {"metric", "value", "config_hash"} - set(record)
        if missing:
            raise ConfigurationError(f"metric record {record!r} lacks fields {sorted(missing)}")
    path.write_text(json.dumps(records, indent=2, sort_keys=True) + "\n")
    return path


def read_metrics(path: Union[str, Path]) -> List[dict]:
    return json.loads(Path(path).read_text())


_MASK_ALIASES = {"M": "num_delay", "N": "num_doppler", "T_s": "sample_interval"}


def load_mask(source: Union[str, Path, dict]) -> SpectrumMask:
    """Read a mask from JSON: explicit null bins or pass bands in Hz.

    Accepts ``{"null_bins": [...]}`` or ``{"pass_bands_hz": [[lo, hi], ...]}``
    plus the grid geometry (descriptive keys, with M/N/T_s accepted as
    aliases).
    """
    if isinstance(source, (str, Path)):
        spec = json.loads(Path(source).read_text())
    else:
        spec = dict(source)
    for alias, canonical in _MASK_ALIASES.items():
        if alias in spec and canonical not in spec:
            spec[canonical] = spec.pop(alias)
    try:
        num_delay = int(spec["num_delay"])
        num_doppler = int(spec["num_doppler"])
    except KeyError as missing:
        raise ConfigurationError(f"mask is missing grid field {missing}") from None
    if "null_bins" in spec:
        return decompose_mask(spec["null_bins"], num_delay, num_doppler)
    if "pass_bands_hz" in spec:
        if "sample_interval" not in spec:
            raise ConfigurationError("a pass-band mask needs sample_interval (or T_s)")
        bands = [tuple(band) for band in spec["pass_bands_hz"]]
        return mask_from_pass_bands(bands, num_delay, num_doppler, float(spec["sample_interval"]))
    raise ConfigurationError("mask needs either 'null_bins' or 'pass_bands_hz'")


def write_mask(path: Union[str, Path], mask: SpectrumMask, sample_interval: Optional[float] = None) -> Path:
    path = Path(path)
    payload: Dict[str, object] = {
        "num_delay": mask.num_delay,
        "num_doppler": mask.num_doppler,
        "null_bins": [int(b) for b in mask.null_bins],
    }
    if sample_interval is not None:
        payload["sample_interval"] = sample_interval
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    return path


def write_precoder_set(
    path: Union[str, Path],
    precoders: PrecoderSet,
    extra_header: Optional[Dict[str, object]] = None,
) -> Path:
    """Per-subcarrier complex matrix dump: rows of subcarrier,row,col,re,im."""
    path = Path(path)
    mask = precoders.mask
    header: Dict[str, object] = {
        "format": "otfspectrum-precoders-v1",
        "form": precoders.form,
        "num_delay": mask.num_delay,
        "num_doppler": mask.num_doppler,
        "null_bins": ",".join(str(int(b)) for b in mask.null_bins),
    }
    if extra_header:
        header.update(extra_header)
    with path.open("w") as handle:
        _write_header(handle, header)
        handle.write("subcarrier,row,col,re,im\n")
        for k, matrix in enumerate(precoders.matrices):
            for r in range(matrix.shape[0]):
                for c in range(matrix.shape[1]):
                    value = matrix[r, c]
                    handle.write(f"{k},{r},{c},{float(value.real)!r},{float(value.imag)!r}\n")
    return path
