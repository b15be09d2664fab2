"""Time the numba and numpy CWLT kernels on the built-in experiment sizes.

Run with ``python3 benchmarks/bench_transform.py``.  The first numba call
includes JIT compilation, so it is warmed up before timing.
"""
from __future__ import annotations

import argparse
import time

import numpy as np

from cwlt import _kernels
from cwlt.signal_model import BUILTIN_N, builtin, sample
from cwlt.sigma import sigma2
from cwlt.transform import default_grid, transform
from cwlt.window import WindowSpec


def _best_of(fn, repeats):
    times = []
    for _ in range(repeats):
        start = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - start)
    return min(times), out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeats", type=int, default=3)
    ap.add_argument("--nfreq", type=int, default=256)
    args = ap.parse_args(argv)

    if not _kernels.HAVE_NUMBA:
        print("numba is not importable; only the numpy backend is available")
        return 1
    w = WindowSpec()
    print(f"{'signal':<12}{'n':>6}{'nfreq':>7}{'numpy s':>10}{'numba s':>10}{'speedup':>9}{'max diff':>11}")
    for name in ("two_chirp", "three_mode"):
        spec = builtin(name)
        sig = sample(spec, BUILTIN_N[name], "complex")
        grid = default_grid(sig, args.nfreq)
        sig_prof = sigma2(spec, w, sig.times, clamp_upsilon=name == "three_mode")
        transform(sig, grid, sig_prof, w, backend="numba")  # compile
        t_np, a = _best_of(lambda: transform(sig, grid, sig_prof, w, backend="numpy"), args.repeats)
        t_nb, b = _best_of(lambda: transform(sig, grid, sig_prof, w, backend="numba"), args.repeats)
        diff = float(np.max(np.abs(a.values - b.values)))
        print(f"{name:<12}{sig.n:>6}{args.nfreq:>7}{t_np:>10.3f}{t_nb:>10.3f}{t_np / t_nb:>9.1f}{diff:>11.1e}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
