"""``cwlt`` command line.

Exit codes: 0 success, 2 usage error (bad flags or inputs), 1 computation error.
Every command writes ``config.json`` with the effective parameters.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import io
from ._kernels import backend_name
from .bounds import BoundInputs, estimate_eps, verify_theorems
from .experiments import ExperimentConfig, rmse_per_component, run
from .recover import recover_chirp, recover_sinusoidal
from .ridges import extract, two_pass_chirp_extract
from .sigma import SigmaRequest
from .signal_model import BUILTIN_N, add_noise, builtin, sample
from .transform import DEFAULT_HALF_WIDTH, default_grid, transform
from .window import WindowSpec


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(2)


def _sigma_arg(text):
    try:
        SigmaRequest.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None
    return text


def _odd(text):
    v = int(text)
    if v < 1 or v % 2 == 0:
        raise argparse.ArgumentTypeError("must be a positive odd integer")
    return v


def _positive_int(text):
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return v


def _add_window(p):
    p.add_argument("--tau0", type=float, default=0.125, help="essential-support threshold (default 1/8)")
    p.add_argument("--mu", type=float, default=1.0)


def _add_tf(p):
    _add_window(p)
    p.add_argument("--sigma", type=_sigma_arg, default="sigma2", help="const:<v> | sigma1 | sigma2")
    p.add_argument("--nfreq", type=int, default=256)
    p.add_argument("--half-width", type=float, default=DEFAULT_HALF_WIDTH)
    p.add_argument("--clamp-upsilon", action="store_true", help="clamp negative sigma2 discriminants to zero")


def _add_ridge(p):
    p.add_argument("--K", type=_positive_int, default=None, help="number of components (default: from the signal)")
    p.add_argument("--model", choices=("sin", "chirp"), default="sin")
    p.add_argument("--threshold", type=float, default=0.2)
    p.add_argument("--chirp-smooth", type=_odd, default=9, help="median length before chirp-rate differentiation")
    p.add_argument("--chirp-step", type=_positive_int, default=32, help="five-point stencil spacing in samples")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="cwlt", description="Adaptive CWLT analysis, separation and experiments.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("synth", help="sample a built-in signal")
    s.add_argument("--signal", default="two-chirp", help="two-chirp | three-mode")
    s.add_argument("--n", type=int, default=None)
    s.add_argument("--kind", choices=("real", "complex"), default="real")
    s.add_argument("--snr", type=float, default=None)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--out", required=True)

    for name, hlp in (("transform", "compute the CWLT of a signal CSV"),
                      ("ridges", "extract ridges"),
                      ("separate", "extract ridges and recover components")):
        q = sub.add_parser(name, help=hlp)
        q.add_argument("--in", dest="inp", required=True, help="signal CSV written by synth")
        _add_tf(q)
        if name != "transform":
            _add_ridge(q)
        q.add_argument("--out", required=True)

    b = sub.add_parser("bounds", help="evaluate error bounds and check them on a built-in signal")
    b.add_argument("--signal", default="two-chirp")
    b.add_argument("--n", type=int, default=None)
    _add_tf(b)
    b.add_argument("--threshold", type=float, default=0.2)
    b.add_argument("--eps", type=float, nargs=3, metavar=("EPS1", "EPS2", "EPS3"), default=None,
                   help="default: sup-norms computed from the signal")
    b.add_argument("--slack", type=float, default=1e-3)
    b.add_argument("--out", required=True)

    e = sub.add_parser("eval", help="trimmed RMSE of recovered_k*.csv files against their truth column")
    e.add_argument("--in", dest="inp", required=True, help="directory with recovered_k*.csv")
    e.add_argument("--out", default=None, help="default: the input directory")

    x = sub.add_parser("experiment", help="run a reference experiment")
    x.add_argument("name", choices=("two-chirp", "three-mode"))
    _add_window(x)
    x.add_argument("--sigma", type=_sigma_arg, default="sigma2")
    x.add_argument("--model", choices=("sin", "chirp"), default="chirp")
    x.add_argument("--threshold", type=float, default=0.2)
    x.add_argument("--nfreq", type=int, default=256)
    x.add_argument("--snr", type=float, default=None, help="dB; omit for a clean run")
    x.add_argument("--seed", type=int, default=0)
    x.add_argument("--repeats", type=_positive_int, default=1)
    x.add_argument("--chirp-smooth", type=_odd, default=9)
    x.add_argument("--chirp-step", type=_positive_int, default=32)
    x.add_argument("--half-width", type=float, default=DEFAULT_HALF_WIDTH)
    x.add_argument("--out", required=True)
    return p


# --- helpers --------------------------------------------------------------------


def _window(a):
    try:
        return WindowSpec(a.mu, a.tau0)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _spec_or_none(name):
    if name is None:
        return None
    try:
        return builtin(name)
    except KeyError as exc:
        raise UsageError(str(exc.args[0])) from None


def _check_common(a):
    if getattr(a, "nfreq", 256) < 16:
        raise UsageError("--nfreq must be >= 16")
    if hasattr(a, "threshold") and not 0 < a.threshold < 1:
        raise UsageError("--threshold must lie in (0, 1)")
    if getattr(a, "half_width", 1.0) <= 0:
        raise UsageError("--half-width must be positive")


def _load_signal(path):
    path = Path(path)
    if not path.exists():
        raise UsageError(f"input file not found: {path}")
    try:
        return io.read_signal(path)
    except ValueError as exc:
        raise UsageError(f"cannot read {path}: {exc}") from None


def _tf_from_args(a, sig, spec_name):
    window = _window(a)
    req = SigmaRequest.parse(a.sigma, a.clamp_upsilon)
    spec = _spec_or_none(spec_name)
    if req.mode != "constant" and spec is None:
        raise UsageError(f"--sigma {a.sigma} needs a built-in signal (synth output with its .json sidecar)")
    prof = req.profile(sig.times, spec, window)
    tf = transform(sig, default_grid(sig, a.nfreq), prof, window, a.half_width)
    return tf, spec, window


def _ridges_from_args(a, tf, spec):
    K = a.K if a.K is not None else (spec.K if spec is not None else None)
    if K is None:
        raise UsageError("--K is required when the signal is not a built-in")
    if a.model == "chirp":
        if tf.n_time < 4 * a.chirp_step + 1:
            raise UsageError(f"--chirp-step {a.chirp_step} needs at least {4 * a.chirp_step + 1} samples")
        return two_pass_chirp_extract(tf, K, a.threshold, a.chirp_smooth, a.chirp_step)
    return extract(tf, K, a.threshold, "sinusoidal")


def _config(a, **extra):
    d = {k: v for k, v in vars(a).items()}
    d.update(extra)
    d["backend"] = backend_name()
    return d


# --- commands -------------------------------------------------------------------


def cmd_synth(a):
    spec = _spec_or_none(a.signal)
    key = a.signal.replace("-", "_")
    n = a.n or BUILTIN_N[key]
    if n < 8:
        raise UsageError("--n must be >= 8")
    sig = sample(spec, n, a.kind)
    if a.snr is not None:
        sig = add_noise(sig, a.snr, a.seed)
    out = Path(a.out)
    io.write_signal(out / "signal.csv", sig, key)
    io.write_json(out / "config.json", _config(a, n=n, sample_rate=sig.sample_rate))


def cmd_transform(a):
    sig, spec_name = _load_signal(a.inp)
    tf, _, _ = _tf_from_args(a, sig, spec_name)
    out = Path(a.out)
    io.write_tf(out, tf)
    io.write_sigma(out / "sigma.csv", sig.times, tf.sigma.sigma)
    io.write_json(out / "config.json", _config(a, n=sig.n, sample_rate=sig.sample_rate, spec=spec_name))


def cmd_ridges(a, recover=False):
    sig, spec_name = _load_signal(a.inp)
    tf, spec, _ = _tf_from_args(a, sig, spec_name)
    ridge = _ridges_from_args(a, tf, spec)
    out = Path(a.out)
    t = sig.times
    io.write_ridges(out / "ridges.csv", t, ridge)
    io.write_sigma(out / "sigma.csv", t, tf.sigma.sigma)
    if recover:
        truth = spec.components_at(t, sig.kind) if spec is not None and spec.K == ridge.K else None
        fn = recover_chirp if a.model == "chirp" else recover_sinusoidal
        for k in range(ridge.K):
            rec = fn(tf, ridge, k, sig.kind)
            io.write_recovered(out / f"recovered_k{k + 1}.csv", t, rec.values,
                               None if truth is None else truth[k])
    io.write_json(out / "config.json", _config(a, K=ridge.K, n=sig.n, spec=spec_name))


def cmd_bounds(a):
    spec = _spec_or_none(a.signal)
    key = a.signal.replace("-", "_")
    n = a.n or BUILTIN_N[key]
    if n < 8:
        raise UsageError("--n must be >= 8")
    window = _window(a)
    sig = sample(spec, n, "complex")
    tf, _, _ = _tf_from_args(a, sig, key)
    t = sig.times
    eps = tuple(a.eps) if a.eps is not None else estimate_eps(spec)
    if min(eps) < 0:
        raise UsageError("--eps values must be non-negative")
    inp = BoundInputs(spec, window, tf.sigma, t, *eps)
    r_sin = extract(tf, spec.K, a.threshold, "sinusoidal")
    r_chirp = extract(tf, spec.K, a.threshold, "chirp", chirp_rates=spec.chirp_rates(t))
    out = Path(a.out)
    summary = {}
    for ell in range(spec.K):
        rep = verify_theorems(inp, tf, r_sin, ell, r_chirp, a.slack)
        io.write_bounds(out / f"bounds_k{ell + 1}.csv", rep)
        summary[f"k{ell + 1}"] = rep.summary()
    io.write_json(out / "bounds_summary.json", summary)
    io.write_json(out / "config.json", _config(a, n=n, eps_used=list(eps), kind="complex"))


def cmd_eval(a):
    src = Path(a.inp)
    files = sorted(src.glob("recovered_k*.csv"), key=lambda p: int(p.stem.split("_k")[-1]))
    if not files:
        raise UsageError(f"no recovered_k*.csv files in {src}")
    recs, truths = [], []
    for f in files:
        rec, truth = io.read_recovered(f)
        if truth is None:
            raise UsageError(f"{f} has no truth column")
        recs.append(rec)
        truths.append(truth)
    per = rmse_per_component(np.array(truths), np.array(recs))
    out = Path(a.out) if a.out else src
    io.write_json(out / "eval.json", {"rmse_recovery": float(per.mean()), "rmse_recovery_components": per.tolist(),
                                      "files": [f.name for f in files]})
    io.write_json(out / "eval_config.json" if out == src else out / "config.json", _config(a))
    print(f"rmse_recovery {per.mean():.6g}")


def cmd_experiment(a):
    try:
        cfg = ExperimentConfig(
            experiment=a.name, sigma=a.sigma, model=a.model, snr_db=a.snr, seed=a.seed, repeats=a.repeats,
            tau0=a.tau0, mu=a.mu, threshold=a.threshold, n_freq=a.nfreq, chirp_smooth=a.chirp_smooth,
            chirp_step=a.chirp_step, half_width=a.half_width,
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    res = run(cfg, a.out)
    primary = res.summary()["primary_method"]
    print(f"rmse_recovery[{primary}] {res.rmse_recovery[primary]:.6g}  rmse_if[{primary}] {res.rmse_if[primary]:.6g}")


COMMANDS = {
    "synth": cmd_synth,
    "transform": cmd_transform,
    "ridges": cmd_ridges,
    "separate": lambda a: cmd_ridges(a, recover=True),
    "bounds": cmd_bounds,
    "eval": cmd_eval,
    "experiment": cmd_experiment,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        _check_common(args)
        COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"cwlt: error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # computation failures are reported, not raised
        print(f"cwlt: {args.command} failed: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
