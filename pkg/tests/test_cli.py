"""End-to-end checks of the ``otfspectrum`` command line via ``main(argv)``."""

import json
from pathlib import Path

import numpy as np
import pytest

from otfspectrum.cli import main
from otfspectrum.io import read_frame_stream, read_metrics, read_psd_curve
from otfspectrum.presets import PRESET_NAMES


def run(*argv):
    return main([str(a) for a in argv])


def test_generate_writes_stream(tmp_path, capsys):
    out = tmp_path / "stream.csv"
    code = run(
        "generate", "--seed", 7, "--num-delay", 2, "--num-doppler", 4,
        "--sample-interval", 1.0, "--uniform", 1.0, "--frames", 3, "--out", out,
    )
    assert code == 0
    assert "wrote 3 frames" in capsys.readouterr().out
    stream = read_frame_stream(out)
    assert stream.frames.shape == (3, 8)
    assert stream.seed == 7


def test_generate_is_deterministic(tmp_path):
    args = [
        "generate", "--seed", 42, "--num-delay", 2, "--num-doppler", 2,
        "--sample-interval", 1.0, "--uniform", 1.0, "--frames", 4,
    ]
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert run(*args, "--out", a) == 0
    assert run(*args, "--out", b) == 0
    assert a.read_bytes() == b.read_bytes()


def test_missing_seed_is_usage_error(tmp_path, capsys):
    code = run(
        "generate", "--num-delay", 2, "--num-doppler", 2,
        "--sample-interval", 1.0, "--uniform", 1.0, "--out", tmp_path / "s.csv",
    )
    assert code == 2
    assert "seed" in capsys.readouterr().err


def test_flags_override_config_file(tmp_path):
    config = tmp_path / "cfg.json"
    config.write_text(json.dumps({
        "seed": 1,
        "grid": {"num_delay": 2, "num_doppler": 4, "sample_interval": 1.0},
        "profile": {"uniform": 1.0},
        "stream": {"num_frames": 2},
    }))
    out = tmp_path / "s.csv"
    assert run("generate", "--config", config, "--frames", 5, "--out", out) == 0
    assert read_frame_stream(out).num_frames == 5


def test_bad_config_json_is_exit_2(tmp_path, capsys):
    config = tmp_path / "broken.json"
    config.write_text("{not json")
    assert run("generate", "--config", config, "--out", tmp_path / "s.csv") == 2
    assert "error:" in capsys.readouterr().err


def test_unknown_key_rejected(tmp_path, capsys):
    config = tmp_path / "cfg.json"
    config.write_text(json.dumps({
        "seed": 1,
        "grid": {"num_delay": 2, "num_doppler": 2, "sample_interval": 1.0},
        "profile": {"uniform": 1.0},
        "turbo": True,
    }))
    assert run("generate", "--config", config, "--out", tmp_path / "s.csv") == 2
    assert "turbo" in capsys.readouterr().err


def test_psd_analytic_then_estimate_and_compare(tmp_path, capsys):
    base = [
        "--seed", 5, "--num-delay", 2, "--num-doppler", 8,
        "--sample-interval", 1.0, "--uniform", 1.0,
    ]
    ref = tmp_path / "ref.csv"
    assert run("psd-analytic", *base, "--waveform", "otfs", "--points", 256, "--out", ref) == 0
    curve = read_psd_curve(ref)
    assert curve.freqs.size == 256
    np.testing.assert_allclose(curve.values, 1.0, atol=1e-12)  # uniform profile is flat

    est = tmp_path / "est.csv"
    metrics_path = tmp_path / "metrics.json"
    code = run(
        "psd-estimate", *base, "--frames", 600, "--out", est,
        "--reference", ref, "--metrics-out", metrics_path,
    )
    assert code == 0
    records = read_metrics(metrics_path)
    by_name = {r["metric"]: r["value"] for r in records}
    assert by_name["nmse_db"] < -20.0
    assert by_name["cosine_similarity"] > 0.999
    assert all(r["config_hash"] == records[0]["config_hash"] for r in records)

    # compare subcommand prints the same metric values to stdout as JSON
    capsys.readouterr()
    assert run("compare", "--estimated", est, "--reference", ref) == 0
    printed = json.loads(capsys.readouterr().out)
    assert printed["nmse_db"] == pytest.approx(by_name["nmse_db"])
    assert printed["cosine_similarity"] == pytest.approx(by_name["cosine_similarity"])
    assert run("compare", "--estimated", est, "--reference", ref, "--out",
               tmp_path / "cmp.json") == 0
    cmp_records = read_metrics(tmp_path / "cmp.json")
    assert {r["metric"] for r in cmp_records} == {"nmse_db", "cosine_similarity"}


def test_precode_requires_mask(tmp_path, capsys):
    code = run(
        "precode", "--seed", 1, "--num-delay", 2, "--num-doppler", 4,
        "--sample-interval", 1.0, "--uniform", 1.0, "--out", tmp_path / "p.csv",
    )
    assert code == 2
    assert "mask" in capsys.readouterr().err


def test_precode_with_mask_file(tmp_path, capsys):
    mask_file = tmp_path / "mask.json"
    mask_file.write_text(json.dumps({"M": 2, "N": 4, "null_bins": [2, 6]}))
    out = tmp_path / "precoders.csv"
    stream_out = tmp_path / "coded.csv"
    code = run(
        "precode", "--seed", 9, "--num-delay", 2, "--num-doppler", 4,
        "--sample-interval", 1.0, "--uniform", 1.0, "--frames", 4,
        "--mask-file", mask_file, "--out", out, "--stream-out", stream_out,
    )
    assert code == 0
    text = capsys.readouterr().out
    assert "null_space" in text
    stream = read_frame_stream(stream_out)
    assert stream.frames.shape == (4, 8)
    # the masked bins really are dark in every frame
    spectra = np.fft.fft(stream.frames, axis=1, norm="ortho")
    assert np.max(np.abs(spectra[:, [2, 6]])) < 1e-12


def test_systematic_infeasible_exit_code(tmp_path, capsys):
    mask_file = tmp_path / "mask.json"
    mask_file.write_text(json.dumps({
        "M": 64, "N": 2, "null_bins": [2 * m for m in range(32)],
    }))
    code = run(
        "precode", "--seed", 1, "--num-delay", 64, "--num-doppler", 2,
        "--sample-interval", 1.0, "--uniform", 1.0,
        "--precoder-form", "systematic",
        "--mask-file", mask_file, "--out", tmp_path / "p.csv",
    )
    assert code == 3
    assert "nslp_precoder" in capsys.readouterr().err


def test_scenario_list(capsys):
    assert run("scenario", "--list") == 0
    out = capsys.readouterr().out
    for name in PRESET_NAMES:
        assert name in out


def test_scenario_requires_selection(capsys):
    assert run("scenario") == 2
    assert "--preset" in capsys.readouterr().err


def test_scenario_unknown_preset(capsys):
    assert run("scenario", "--preset", "no-such-preset") == 2


def test_scenario_single_preset_writes_manifest(tmp_path, capsys):
    outdir = tmp_path / "run"
    code = run(
        "scenario", "--preset", "example1", "--outdir", outdir,
        "--frames", 16, "--points", 512,
    )
    assert code == 0
    manifest = json.loads((outdir / "example1_manifest.json").read_text())
    assert manifest["preset"] == "example1"
    assert set(manifest["files"]) == {"dirac_delta", "truncated_sinc", "rect"}
    for path in manifest["files"].values():
        assert Path(path).exists()


def test_scenario_rerun_is_byte_identical(tmp_path):
    args = ["scenario", "--preset", "cep-split", "--frames", 8, "--points", 256,
            "--outdir", tmp_path / "run"]
    assert run(*args) == 0
    snapshot = {p.name: p.read_bytes() for p in (tmp_path / "run").iterdir()}
    assert run(*args) == 0
    again = {p.name: p.read_bytes() for p in (tmp_path / "run").iterdir()}
    assert again == snapshot


def test_version_flag(capsys):
    assert run("--version") == 0
    assert "otfspectrum" in capsys.readouterr().out
