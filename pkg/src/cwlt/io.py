"""CSV/JSON readers and writers.

CSV floats use 17 significant digits so values round-trip exactly; JSON uses
Python's shortest round-trip repr.  Everything is UTF-8 with LF endings.
"""
from __future__ import annotations

import json
import math
from pathlib import Path

import numpy as np

from .signal_model import SampledSignal

FMT = "%.17g"


def _clean(obj):
    # JSON has no inf/nan; map them to strings so the echo stays lossless
    if isinstance(obj, float) and not math.isfinite(obj):
        return str(obj)
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _clean(obj.tolist())
    if isinstance(obj, np.generic):
        return _clean(obj.item())
    return obj


def write_json(path, obj) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    text = json.dumps(_clean(obj), indent=2, sort_keys=True, allow_nan=False)
    path.write_text(text + "\n", encoding="utf-8", newline="\n")
    return path


def read_json(path):
    return json.loads(Path(path).read_text(encoding="utf-8"))


def write_csv(path, header: list[str] | None, columns) -> Path:
    """Write equal-length 1-D columns (or a 2-D array when ``header`` is None)."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    data = np.asarray(columns, dtype=float)
    if header is not None:
        data = np.column_stack([np.asarray(c, dtype=float) for c in columns])
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        np.savetxt(fh, data, fmt=FMT, delimiter=",", newline="\n",
                   header="" if header is None else ",".join(header), comments="")
    return path


def read_csv(path):
    """Return ``(header, data)`` for a CSV written by :func:`write_csv`."""
    path = Path(path)
    with open(path, encoding="utf-8") as fh:
        first = fh.readline().strip()
    try:
        float(first.split(",")[0])
        header, skip = None, 0
    except ValueError:
        header, skip = first.split(","), 1
    data = np.loadtxt(path, delimiter=",", skiprows=skip, ndmin=2)
    return header, data


# --- signals ------------------------------------------------------------------


def write_signal(path, sig: SampledSignal, spec_name: str | None = None) -> Path:
    """``t,value_re`` (real) or ``t,value_re,value_im`` (complex), plus a ``.json`` sidecar."""
    path = Path(path)
    if sig.kind == "real":
        write_csv(path, ["t", "value_re"], [sig.times, sig.samples])
    else:
        write_csv(path, ["t", "value_re", "value_im"], [sig.times, sig.samples.real, sig.samples.imag])
    side = {"kind": sig.kind, "n": sig.n, "sample_rate": sig.sample_rate, "t_start": sig.t_start,
            "spec_name": spec_name, "snr_db": sig.meta.get("snr_db"), "seed": sig.meta.get("seed")}
    write_json(path.with_suffix(".json"), side)
    return path


def read_signal(path):
    """Return ``(SampledSignal, spec_name or None)``.

    The sidecar supplies the exact sample rate; without one it is inferred
    from the time column.
    """
    path = Path(path)
    header, data = read_csv(path)
    if data.shape[1] not in (2, 3):
        raise ValueError(f"{path}: expected columns t,value_re[,value_im]")
    side_path = path.with_suffix(".json")
    side = read_json(side_path) if side_path.exists() else {}
    t = data[:, 0]
    if data.shape[1] == 2:
        x, kind = data[:, 1], "real"
    else:
        x, kind = data[:, 1] + 1j * data[:, 2], "complex"
    if "sample_rate" in side:
        fs = float(side["sample_rate"])
    else:
        if t.size < 2:
            raise ValueError(f"{path}: cannot infer the sample rate")
        fs = (t.size - 1) / (t[-1] - t[0])
    meta = {k: side[k] for k in ("snr_db", "seed") if side.get(k) is not None}
    sig = SampledSignal(x, fs, float(side.get("t_start", t[0])), kind, meta)
    return sig, side.get("spec_name")


# --- transform ----------------------------------------------------------------


def write_tf(outdir, tf) -> None:
    """``tf.json`` header, ``tf_values.csv`` (re,im per entry, column-major) and ``tf_magnitude.csv``."""
    outdir = Path(outdir)
    header = {
        "n_freq": tf.grid.n_freq, "n_time": tf.n_time, "freqs": tf.grid.freqs, "sigma": tf.sigma.sigma,
        "mu": tf.window.mu, "tau0": tf.window.tau0, "t_start": tf.t_start, "fs": tf.sample_rate,
        "half_width": tf.source_meta.get("half_width"), "order": "column-major",
    }
    write_json(outdir / "tf.json", header)
    flat = tf.values.T.reshape(-1)  # column m, then frequency i
    write_csv(outdir / "tf_values.csv", ["re", "im"], [flat.real, flat.imag])
    write_magnitude(outdir / "tf_magnitude.csv", tf)


def write_magnitude(path, tf) -> Path:
    """One row per frequency: ``freq, |W|(t_0), ..., |W|(t_{n-1})``; no header."""
    return write_csv(path, None, np.column_stack([tf.grid.freqs, np.abs(tf.values)]))


def read_tf_values(outdir):
    outdir = Path(outdir)
    head = read_json(outdir / "tf.json")
    _, data = read_csv(outdir / "tf_values.csv")
    vals = (data[:, 0] + 1j * data[:, 1]).reshape(head["n_time"], head["n_freq"]).T
    return head, vals


# --- per-time series ------------------------------------------------------------


def write_sigma(path, times, sigma) -> Path:
    return write_csv(path, ["t", "sigma"], [times, sigma])


def write_ridges(path, times, ridge) -> Path:
    K = ridge.K
    chirp = ridge.chirp_est if ridge.chirp_est is not None else np.full(ridge.idx.shape, np.nan)
    header = ["t"] + [f"if_{k + 1}" for k in range(K)] + [f"chirp_{k + 1}" for k in range(K)] \
        + [f"a_{k + 1}" for k in range(K)]
    cols = [times, *ridge.if_est, *chirp, *ridge.a_hat]
    return write_csv(path, header, cols)


def write_recovered(path, times, values, truth=None) -> Path:
    values = np.asarray(values)
    if np.iscomplexobj(values):
        header, cols = ["t", "recovered_re", "recovered_im"], [times, values.real, values.imag]
    else:
        header, cols = ["t", "recovered"], [times, values]
    if truth is not None:
        truth = np.asarray(truth)
        if np.iscomplexobj(truth):
            header += ["truth_re", "truth_im"]
            cols += [truth.real, truth.imag]
        else:
            header += ["truth"]
            cols += [truth]
        header += ["abs_error"]
        cols += [np.abs(values - truth)]
    return write_csv(path, header, cols)


def read_recovered(path):
    """Return ``(recovered, truth or None)`` from a recovered-component CSV."""
    header, data = read_csv(path)
    col = {name: data[:, i] for i, name in enumerate(header)}
    rec = col["recovered"] if "recovered" in col else col["recovered_re"] + 1j * col["recovered_im"]
    if "truth" in col:
        truth = col["truth"]
    elif "truth_re" in col:
        truth = col["truth_re"] + 1j * col["truth_im"]
    else:
        truth = None
    return rec, truth


def write_bounds(path, report) -> Path:
    names = sorted(report.values)
    flags = sorted(report.flags)
    header = ["t"] + names + [f"flag_{f}" for f in flags]
    cols = [report.times] + [np.broadcast_to(report.values[n], report.times.shape) for n in names] \
        + [report.flags[f].astype(float) for f in flags]
    return write_csv(path, header, cols)
