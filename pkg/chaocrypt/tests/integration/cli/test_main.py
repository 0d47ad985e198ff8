"""End-to-end tests of the ``chaocrypt`` command line."""

import pathlib
import subprocess
import sys

import numpy as np
import pytest

import chaocrypt
from chaocrypt.cipher_engine import ImageBuffer
from chaocrypt.cli import EXIT_DOMAIN, EXIT_FORMAT, EXIT_IO, EXIT_USAGE
from chaocrypt.envelope_io import read_key, read_ppm, write_ppm
from chaocrypt.tests import make_smooth_image


# Directory from which ``python -m chaocrypt`` resolves the package.
_PACKAGE_PARENT = pathlib.Path(chaocrypt.__file__).resolve().parents[1]


def _run(*args):
    return subprocess.run(
        [sys.executable, "-m", "chaocrypt", *map(str, args)],
        capture_output=True,
        text=True,
        cwd=_PACKAGE_PARENT,
    )


def _report(stdout):
    return dict(line.split("=", 1) for line in stdout.splitlines())


@pytest.fixture
def workspace(tmp_path):
    write_ppm(make_smooth_image(64, 64), tmp_path / "plain.ppm")
    result = _run("keygen", "--out", tmp_path / "secret.key", "--seed", 42)
    assert result.returncode == 0, result.stderr
    return tmp_path


def _encrypt(workspace, name="cipher.cbpx", source="plain.ppm"):
    result = _run(
        "encrypt",
        "--in",
        workspace / source,
        "--key",
        workspace / "secret.key",
        "--block",
        16,
        "--out",
        workspace / name,
    )
    assert result.returncode == 0, result.stderr
    return workspace / name


def test_keygen(tmp_path):
    """Test that keys are reproducible by seed and always valid."""
    paths = [tmp_path / name for name in ("a.key", "b.key", "c.key")]
    for path, seed in zip(paths, (7, 7, 8)):
        assert _run("keygen", "--out", path, "--seed", seed).returncode == 0
    assert paths[0].read_bytes() == paths[1].read_bytes()
    assert paths[0].read_bytes() != paths[2].read_bytes()
    key = read_key(paths[2])
    for name in ("x", "y", "v", "w"):
        assert 0.01 <= getattr(key, name) < 0.99
    assert (key.mu, key.a, key.b, key.n_iter) == (3.99, 2.75, 0.2, 1000)


def test_keygen_verbose(tmp_path):
    """Test that the key space is logged on request."""
    result = _run("--verbose", "keygen", "--out", tmp_path / "a.key")
    assert result.returncode == 0
    assert "265.75 bits" in result.stderr
    assert result.stdout == ""


def test_encrypt_decrypt(workspace):
    """Test that the command line roundtrip reproduces the pixmap bytes."""
    envelope = _encrypt(workspace)
    result = _run(
        "decrypt",
        "--in",
        envelope,
        "--key",
        workspace / "secret.key",
        "--out",
        workspace / "recovered.ppm",
    )
    assert result.returncode == 0, result.stderr
    recovered = (workspace / "recovered.ppm").read_bytes()
    assert recovered == (workspace / "plain.ppm").read_bytes()


def test_encrypt_indivisible_block(workspace):
    """Test that a block size not dividing the image is a domain error."""
    result = _run(
        "encrypt",
        "--in",
        workspace / "plain.ppm",
        "--key",
        workspace / "secret.key",
        "--block",
        33,
        "--out",
        workspace / "cipher.cbpx",
    )
    assert result.returncode == EXIT_DOMAIN
    assert result.stderr.startswith("chaocrypt encrypt: ")
    assert "divide" in result.stderr
    assert len(result.stderr.splitlines()) == 1
    assert not (workspace / "cipher.cbpx").exists()


def test_encrypt_missing_key(workspace):
    """Test that a missing key file is an I/O error."""
    result = _run(
        "encrypt",
        "--in",
        workspace / "plain.ppm",
        "--key",
        workspace / "absent.key",
        "--out",
        workspace / "cipher.cbpx",
    )
    assert result.returncode == EXIT_IO
    assert result.stderr.startswith("chaocrypt encrypt: ")


def test_decrypt_malformed_envelope(workspace):
    """Test that a damaged envelope is a format error."""
    envelope = _encrypt(workspace)
    envelope.write_bytes(envelope.read_bytes()[:-1])
    result = _run(
        "decrypt",
        "--in",
        envelope,
        "--key",
        workspace / "secret.key",
        "--out",
        workspace / "recovered.ppm",
    )
    assert result.returncode == EXIT_FORMAT
    assert result.stderr.startswith("chaocrypt decrypt: ")


def test_analyze(workspace):
    """Test the report of an envelope and of a pixmap against itself."""
    envelope = _encrypt(workspace)
    result = _run("analyze", "--in", envelope)
    assert result.returncode == 0, result.stderr
    report = _report(result.stdout)
    assert report["channels"] == "3"
    for name in ("red", "green", "blue"):
        assert float(report[f"{name}.entropy"]) > 7.9
        assert f"{name}.chi_square" in report
        for direction in ("horizontal", "vertical", "diagonal"):
            assert abs(float(report[f"{name}.correlation_{direction}"])) < 0.1

    plain = workspace / "plain.ppm"
    result = _run("analyze", "--in", plain, "--against", plain)
    report = _report(result.stdout)
    assert report["red.psnr"] == "inf"
    assert float(report["red.correlation_horizontal"]) > 0.9


def test_analyze_reproducible(workspace):
    """Test that identical invocations print identical reports."""
    envelope = _encrypt(workspace)
    first = _run("analyze", "--in", envelope)
    second = _run("analyze", "--in", envelope)
    assert first.stdout == second.stdout


def test_analyze_histogram_prefix(workspace):
    """Test that per-channel histograms are written on request."""
    prefix = workspace / "hist"
    result = _run(
        "analyze", "--in", workspace / "plain.ppm", "--histogram-prefix", prefix
    )
    assert result.returncode == 0, result.stderr
    for name in ("red", "green", "blue"):
        lines = (workspace / f"hist-{name}.csv").read_text().splitlines()
        assert len(lines) == 256
        assert sum(int(line.split(",")[1]) for line in lines) == 64 * 64


def test_diff(workspace):
    """Test the differential report of envelopes."""
    first = _encrypt(workspace)
    result = _run("diff", "--a", first, "--b", first)
    assert result.returncode == 0, result.stderr
    report = _report(result.stdout)
    assert float(report["green.npcr"]) == 0.0
    assert float(report["green.uaci"]) == 0.0

    image = read_ppm(workspace / "plain.ppm")
    pixels = image.pixels.copy()
    pixels[10, 20, 1] ^= 1
    write_ppm(ImageBuffer(pixels), workspace / "changed.ppm")
    second = _encrypt(workspace, "changed.cbpx", "changed.ppm")
    report = _report(_run("diff", "--a", first, "--b", second).stdout)
    for name in ("red", "green", "blue"):
        assert float(report[f"{name}.npcr"]) > 98.5
        assert 30.0 < float(report[f"{name}.uaci"]) < 37.0


def test_attack(workspace):
    """Test the robustness CSV of crop and speckle attacks."""
    result = _run(
        "attack",
        "--in",
        workspace / "plain.ppm",
        "--key",
        workspace / "secret.key",
        "--block",
        16,
        "--speckle",
        0.05,
        0.5,
        "--crop",
        0.25,
        "--seed",
        3,
    )
    assert result.returncode == 0, result.stderr
    lines = result.stdout.splitlines()
    assert lines[0] == "attack,parameter,channel,psnr_db,incorrect_fraction"
    rows = [line.split(",") for line in lines[1:]]
    assert [row[0] for row in rows] == ["speckle"] * 6 + ["crop"] * 3
    assert [row[1] for row in rows] == ["0.05"] * 3 + ["0.5"] * 3 + ["0.25"] * 3
    for row in rows[6:]:
        assert float(row[4]) == pytest.approx(0.25, abs=0.01)


def test_attack_needs_attack(workspace):
    """Test that an attack run without attacks is a usage error."""
    result = _run(
        "attack", "--in", workspace / "plain.ppm", "--key", workspace / "secret.key"
    )
    assert result.returncode == EXIT_USAGE


@pytest.mark.parametrize(
    "args",
    [
        (),
        ("encrypt", "--in", "x.ppm"),
        ("bench", "--size", "0"),
        ("attack", "--in", "x", "--key", "k", "--crop", "1.5"),
        ("keygen", "--out", "k", "--seed", "-1"),
    ],
)
def test_usage_errors(args):
    """Test that invalid arguments exit before any file is touched."""
    result = _run(*args)
    assert result.returncode == EXIT_USAGE


def test_bench():
    """Test the timing report of several runs."""
    result = _run("bench", "--size", 64, "--block", 16, "--iterations", 3)
    assert result.returncode == 0, result.stderr
    report = {key: float(value) for key, value in _report(result.stdout).items()}
    assert report["iterations"] == 3
    assert sorted(key for key in report if key.endswith(".total")) == [
        "run.0.total",
        "run.1.total",
        "run.2.total",
    ]
    phases = ("digest", "keystream", "permutation", "diffusion")
    for run in range(3):
        spent = sum(report[f"run.{run}.{phase}"] for phase in phases)
        assert spent <= report[f"run.{run}.total"]
    assert report["total.min"] <= report["total.mean"]
    assert np.isfinite(list(report.values())).all()


def test_bench_indivisible():
    """Test that a block size not dividing the image is a domain error."""
    result = _run("bench", "--size", 64, "--block", 33, "--iterations", 1)
    assert result.returncode == EXIT_DOMAIN
    assert result.stderr.startswith("chaocrypt bench: ")

