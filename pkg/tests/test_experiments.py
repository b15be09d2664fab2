import json

import numpy as np
import pytest

from cwlt import io
from cwlt.experiments import (
    ExperimentConfig,
    rmse,
    rmse_per_component,
    run,
    run_two_chirp,
    trimmed_slice,
)


def test_trimmed_slice():
    s = trimmed_slice(256)
    assert (s.start + 1, s.stop) == (33, 224)
    assert len(range(512)[trimmed_slice(512)]) == 384


def test_rmse_examples():
    truth = np.full((1, 64), 2.0)
    assert rmse(truth, truth) == 0.0
    assert rmse(truth, np.full((1, 64), 2.2)) == pytest.approx(0.1, rel=1e-14)
    two = np.ones((2, 64))
    est = np.vstack([np.ones(64), np.full(64, 1.1)])
    assert rmse(two, est) == pytest.approx(0.05, rel=1e-13)
    np.testing.assert_allclose(rmse_per_component(two, est), [0.0, 0.1], rtol=1e-13)


def test_rmse_ignores_trimmed_ends():
    truth = np.ones((1, 64))
    est = truth.copy()
    est[0, :8] = 100
    est[0, 56:] = -100
    assert rmse(truth, est) == 0.0


def test_rmse_errors():
    with pytest.raises(ZeroDivisionError):
        rmse(np.zeros((1, 64)), np.ones((1, 64)))
    with pytest.raises(ValueError):
        rmse(np.ones((1, 64)), np.ones((2, 64)))


def test_config_validation_and_round_trip(tmp_path):
    cfg = ExperimentConfig("three-mode", "const:2.35", "sin", 15.0, 4, 3)
    assert cfg.experiment == "three_mode" and cfg.n == 512 and cfg.clamp_upsilon
    d = cfg.to_dict()
    io.write_json(tmp_path / "c.json", d)
    assert ExperimentConfig.from_dict(io.read_json(tmp_path / "c.json")) == cfg
    bad = [dict(experiment="nope"), dict(model="x"), dict(sigma="s"), dict(repeats=0), dict(snr_db=float("nan")),
           dict(threshold=1.0), dict(n_freq=8), dict(chirp_smooth=4), dict(chirp_step=0), dict(tau0=2.0)]
    for kw in bad:
        with pytest.raises(ValueError):
            ExperimentConfig(**kw)


def test_two_chirp_output_layout_and_determinism(tmp_path):
    a = run_two_chirp(out_dir=tmp_path / "a")
    run_two_chirp(out_dir=tmp_path / "b")
    names = sorted(p.name for p in (tmp_path / "a").iterdir())
    assert names == sorted(["config.json", "signal.csv", "signal.json", "sigma.csv", "tf_magnitude.csv",
                            "ridges.csv", "recovered_k1.csv", "recovered_k2.csv", "rmse.json"])
    for name in names:
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes(), name
    summary = json.loads((tmp_path / "a" / "rmse.json").read_text())
    assert summary["trimmed_range_1based"] == [33, 224]
    assert summary["primary_method"] == "chirp_est"
    assert set(summary["rmse_recovery"]) == {"sinusoidal", "chirp_true", "chirp_est"}
    assert all(v >= 0 for v in a.rmse_recovery.values())
    header, data = io.read_csv(tmp_path / "a" / "ridges.csv")
    assert header[3:5] == ["chirp_1", "chirp_2"] and np.all(np.isfinite(data))


def test_noisy_repeats_average():
    one = run(ExperimentConfig(snr_db=20.0, seed=5))
    two = run(ExperimentConfig(snr_db=20.0, seed=5, repeats=2))
    other = run(ExperimentConfig(snr_db=20.0, seed=6))
    for m in one.rmse_recovery:
        assert two.rmse_recovery[m] == pytest.approx((one.rmse_recovery[m] + other.rmse_recovery[m]) / 2, rel=1e-12)
