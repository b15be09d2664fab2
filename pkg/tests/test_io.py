import json

import numpy as np
import pytest

from cwlt import io
from cwlt.bounds import BoundInputs, bound_report
from cwlt.ridges import extract
from cwlt.signal_model import SampledSignal, add_noise, builtin, sample
from cwlt.sigma import sigma2
from cwlt.transform import default_grid, transform
from cwlt.window import WindowSpec


def test_json_is_sorted_lf_and_cleans_nonfinite(tmp_path):
    p = io.write_json(tmp_path / "a.json", {"b": np.float64(1.5), "a": [np.inf, np.nan, 1], "c": np.arange(2)})
    raw = p.read_bytes()
    assert b"\r" not in raw and raw.endswith(b"\n")
    data = io.read_json(p)
    assert list(data) == ["a", "b", "c"]
    assert data == {"a": ["inf", "nan", 1], "b": 1.5, "c": [0, 1]}


def test_csv_round_trip_is_exact(tmp_path):
    rng = np.random.default_rng(0)
    cols = [rng.normal(size=20) for _ in range(3)]
    io.write_csv(tmp_path / "x.csv", ["p", "q", "r"], cols)
    header, data = io.read_csv(tmp_path / "x.csv")
    assert header == ["p", "q", "r"]
    assert np.array_equal(data.T, np.array(cols))
    io.write_csv(tmp_path / "y.csv", None, np.array([[1.0, 2.0], [3.0, 4.0]]))
    header, data = io.read_csv(tmp_path / "y.csv")
    assert header is None and data.tolist() == [[1, 2], [3, 4]]


@pytest.mark.parametrize("kind", ["real", "complex"])
def test_signal_round_trip(tmp_path, kind):
    sig = add_noise(sample(builtin("two_chirp"), 256, kind), 20.0, seed=3)
    io.write_signal(tmp_path / "s.csv", sig, "two_chirp")
    back, name = io.read_signal(tmp_path / "s.csv")
    assert name == "two_chirp" and back.kind == kind
    assert back.sample_rate == sig.sample_rate and back.t_start == sig.t_start
    assert np.array_equal(back.samples, sig.samples)
    side = io.read_json(tmp_path / "s.json")
    assert side == {"kind": kind, "n": 256, "sample_rate": 256.0, "t_start": 0.0, "spec_name": "two_chirp",
                    "snr_db": 20.0, "seed": 3}
    assert back.meta == {"snr_db": 20.0, "seed": 3}
    expect = ["t", "value_re"] if kind == "real" else ["t", "value_re", "value_im"]
    assert io.read_csv(tmp_path / "s.csv")[0] == expect


def test_signal_without_sidecar_infers_rate(tmp_path):
    t = np.arange(10) / 8.0
    io.write_csv(tmp_path / "raw.csv", ["t", "x"], [t, np.sin(t)])
    sig, name = io.read_signal(tmp_path / "raw.csv")
    assert name is None and sig.sample_rate == pytest.approx(8.0)
    io.write_csv(tmp_path / "bad.csv", ["t", "a", "b", "c"], [t, t, t, t])
    with pytest.raises(ValueError):
        io.read_signal(tmp_path / "bad.csv")


def test_tf_round_trip(tmp_path):
    spec = builtin("two_chirp")
    sig = sample(spec, 256)
    w = WindowSpec()
    tf = transform(sig, default_grid(sig, 32), sigma2(spec, w, sig.times), w)
    io.write_tf(tmp_path, tf)
    head, vals = io.read_tf_values(tmp_path)
    assert np.array_equal(vals, tf.values)
    assert head["n_freq"] == 32 and head["n_time"] == 256 and head["order"] == "column-major"
    _, mag = io.read_csv(tmp_path / "tf_magnitude.csv")
    assert mag.shape == (32, 257)
    assert np.array_equal(mag[:, 0], tf.grid.freqs)


def test_ridges_recovered_bounds_csv(tmp_path, two_chirp_sigma2):
    spec, sig, tf = two_chirp_sigma2
    r = extract(tf, 2)
    io.write_ridges(tmp_path / "r.csv", sig.times, r)
    header, data = io.read_csv(tmp_path / "r.csv")
    assert header == ["t", "if_1", "if_2", "chirp_1", "chirp_2", "a_1", "a_2"]
    assert np.all(np.isnan(data[:, 3:5]))
    z = np.exp(2j * np.pi * sig.times)
    io.write_recovered(tmp_path / "c.csv", sig.times, z, z * 1.1)
    rec, truth = io.read_recovered(tmp_path / "c.csv")
    assert np.array_equal(rec, z) and np.array_equal(truth, z * 1.1)
    io.write_recovered(tmp_path / "d.csv", sig.times, z.real)
    rec, truth = io.read_recovered(tmp_path / "d.csv")
    assert truth is None and np.array_equal(rec, z.real)
    rep = bound_report(BoundInputs(spec, WindowSpec(), tf.sigma, sig.times), 0)
    io.write_bounds(tmp_path / "b.csv", rep)
    header, data = io.read_csv(tmp_path / "b.csv")
    assert header[0] == "t" and "flag_cond_sin" in header and "Bd2" in header
    assert data.shape == (256, len(header))


def test_floats_use_17_digits(tmp_path):
    io.write_csv(tmp_path / "f.csv", ["v"], [[0.1]])
    assert (tmp_path / "f.csv").read_text().splitlines()[1] == "0.10000000000000001"


def test_read_signal_rejects_bad_rate(tmp_path):
    io.write_signal(tmp_path / "s.csv", SampledSignal(np.ones(8), 2.0))
    side = json.loads((tmp_path / "s.json").read_text())
    side["sample_rate"] = -1
    (tmp_path / "s.json").write_text(json.dumps(side))
    with pytest.raises(ValueError):
        io.read_signal(tmp_path / "s.csv")
