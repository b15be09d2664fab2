import json
import subprocess
import sys

import numpy as np
import pytest

from cwlt import io
from cwlt.cli import main


@pytest.fixture
def synth(tmp_path):
    out = tmp_path / "sig"
    assert main(["synth", "--signal", "two-chirp", "--out", str(out)]) == 0
    return out / "signal.csv"


def _cfg(path):
    return json.loads((path / "config.json").read_text())


def test_synth_writes_signal_and_config(synth):
    cfg = _cfg(synth.parent)
    assert cfg["n"] == 256 and cfg["sample_rate"] == 256.0 and cfg["kind"] == "real"
    assert cfg["seed"] == 0 and cfg["snr"] is None
    sig, name = io.read_signal(synth)
    assert name == "two_chirp" and sig.n == 256


def test_transform_shape_and_echo(tmp_path, synth):
    out = tmp_path / "tf"
    assert main(["transform", "--in", str(synth), "--sigma", "const:1", "--nfreq", "256", "--out", str(out)]) == 0
    _, mag = io.read_csv(out / "tf_magnitude.csv")
    assert mag.shape == (256, 257)
    cfg = _cfg(out)
    for key, val in dict(sigma="const:1", nfreq=256, tau0=0.125, mu=1.0, half_width=6.0).items():
        assert cfg[key] == val


def test_separate_and_eval(tmp_path, synth):
    out = tmp_path / "sep"
    assert main(["separate", "--in", str(synth), "--sigma", "sigma2", "--model", "chirp", "--out", str(out)]) == 0
    names = {p.name for p in out.iterdir()}
    assert {"ridges.csv", "sigma.csv", "recovered_k1.csv", "recovered_k2.csv", "config.json"} <= names
    assert main(["eval", "--in", str(out)]) == 0
    ev = json.loads((out / "eval.json").read_text())
    assert len(ev["rmse_recovery_components"]) == 2 and ev["rmse_recovery"] < 0.1
    assert (out / "eval_config.json").exists()


def test_ridges_needs_K_for_plain_csv(tmp_path):
    t = np.arange(256) / 256
    io.write_csv(tmp_path / "raw.csv", ["t", "value_re"], [t, np.cos(2 * np.pi * 30 * t)])
    args = ["ridges", "--in", str(tmp_path / "raw.csv"), "--sigma", "const:1", "--out", str(tmp_path / "r")]
    assert main(args) == 2
    assert main(args + ["--K", "1"]) == 0
    _, data = io.read_csv(tmp_path / "r" / "ridges.csv")
    assert np.median(data[:, 1]) == pytest.approx(30.0, abs=0.5)
    # sigma1/sigma2 need the ground-truth spec
    assert main(["ridges", "--in", str(tmp_path / "raw.csv"), "--K", "1", "--out", str(tmp_path / "q")]) == 2


def test_bounds_command(tmp_path):
    out = tmp_path / "b"
    assert main(["bounds", "--signal", "two-chirp", "--out", str(out)]) == 0
    summary = json.loads((out / "bounds_summary.json").read_text())
    assert set(summary) == {"k1", "k2"}
    for k in ("k1", "k2"):
        for name in ("chirp_b", "chirp_c", "chirp_d"):
            assert summary[k]["pass_rate"][name] >= 0.95
    assert (out / "bounds_k1.csv").exists()
    assert _cfg(out)["eps_used"] == [0.0, 60.0, 0.0]


def test_experiment_smoke_and_rerun_identical(tmp_path):
    a, b = tmp_path / "run1", tmp_path / "run2"
    for out in (a, b):
        assert main(["experiment", "two-chirp", "--sigma", "sigma2", "--model", "chirp", "--out", str(out)]) == 0
    assert (a / "rmse.json").exists()
    for p in a.iterdir():
        assert p.read_bytes() == (b / p.name).read_bytes(), p.name


@pytest.mark.parametrize(
    "argv",
    [
        ["frobnicate"],
        [],
        ["transform", "--in", "missing.csv", "--out", "x"],
        ["experiment", "two-chirp", "--sigma", "const:0", "--out", "x"],
        ["experiment", "two-chirp", "--model", "wavelet", "--out", "x"],
        ["experiment", "two-chirp", "--bogus", "--out", "x"],
        ["experiment", "two-chirp", "--tau0", "1.5", "--out", "x"],
        ["experiment", "two-chirp", "--chirp-smooth", "4", "--out", "x"],
        ["synth", "--signal", "nope", "--out", "x"],
        ["bounds", "--signal", "two-chirp", "--nfreq", "8", "--out", "x"],
        ["bounds", "--signal", "two-chirp", "--threshold", "0", "--out", "x"],
        ["bounds", "--signal", "two-chirp", "--eps", "-1", "0", "0", "--out", "x"],
    ],
)
def test_usage_errors_exit_2(argv, tmp_path, monkeypatch, capsys):
    monkeypatch.chdir(tmp_path)
    assert main(argv) == 2
    assert capsys.readouterr().err.strip()


def test_eval_without_files_is_usage_error(tmp_path):
    assert main(["eval", "--in", str(tmp_path)]) == 2


def test_computation_error_exits_1(tmp_path):
    # a zero signal yields an empty threshold mask, which is a computation failure
    t = np.arange(64) / 64
    io.write_csv(tmp_path / "z.csv", ["t", "value_re"], [t, np.zeros(64)])
    argv = ["ridges", "--in", str(tmp_path / "z.csv"), "--sigma", "const:1", "--K", "1", "--nfreq", "16",
            "--out", str(tmp_path / "o")]
    assert main(argv) == 1


def test_console_entry_point(tmp_path):
    res = subprocess.run([sys.executable, "-m", "cwlt.cli", "nope"], capture_output=True, text=True)
    assert res.returncode == 2
