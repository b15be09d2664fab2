"""Direct-summation CWLT kernels.

Two interchangeable implementations of the same sum:

    W[i, m] = sum_d x[m + d] * g(d / (Fs a_i s_m)) * exp(-i 2 pi mu d / (Fs a_i)) / (Fs a_i s_m)

over ``|d| <= half_width * Fs * a_i * s_m`` with zero extension outside the
record.  ``numba`` is used when importable unless ``CWLT_DISABLE_NUMBA`` is
set to a truthy value; the numpy path is always available.
"""
from __future__ import annotations

import os
import warnings

import numpy as np

_INV_SQRT_2PI = 1.0 / np.sqrt(2.0 * np.pi)


def _env_disabled() -> bool:
    return os.environ.get("CWLT_DISABLE_NUMBA", "").strip().lower() not in ("", "0", "false", "no")


try:
    import numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None

HAVE_NUMBA = numba is not None

# an outdated system TBB only means numba falls back to another threading layer
warnings.filterwarnings("ignore", message="The TBB threading layer requires")


def _half_widths(scales, sigma, fs, half_width):
    # floor with a tiny guard so exact integers are not lost to rounding
    return np.floor(half_width * fs * np.outer(scales, sigma) + 1e-9).astype(np.int64)


def cwlt_numpy(x, scales, sigma, fs, mu, half_width):
    x = np.asarray(x, dtype=np.complex128)
    scales = np.asarray(scales, dtype=np.float64)
    sigma = np.asarray(sigma, dtype=np.float64)
    n = x.size
    out = np.zeros((scales.size, n), dtype=np.complex128)
    J = _half_widths(scales, sigma, fs, half_width)
    # offsets beyond n - 1 only ever reach the zero extension
    jmax = min(int(J.max()), n - 1)
    # zero padding reproduces the zero extension outside the record
    xpad = np.concatenate([np.zeros(jmax, complex), x, np.zeros(jmax, complex)])
    frames = np.lib.stride_tricks.sliding_window_view(xpad, 2 * jmax + 1)  # frames[m, jmax + d] = x[m + d]
    d = np.arange(-jmax, jmax + 1, dtype=np.float64)
    phase = np.exp(-2j * np.pi * mu * d[None, :] / (fs * scales[:, None]))  # independent of sigma
    # columns sharing a width share one kernel
    values, inverse = np.unique(sigma, return_inverse=True)
    for v, s in enumerate(values):
        cols = np.flatnonzero(inverse == v)
        j = min(int(J[:, cols[0]].max()), n - 1)
        dd = d[jmax - j : jmax + j + 1]
        width = fs * scales[:, None] * s  # samples per unit of window time
        u = dd[None, :] / width
        ker = phase[:, jmax - j : jmax + j + 1] * (np.exp(-0.5 * u * u) * (_INV_SQRT_2PI / width))
        ker[np.abs(dd)[None, :] > J[:, cols[0]][:, None]] = 0.0
        out[:, cols] = ker @ frames[cols, jmax - j : jmax + j + 1].T
    return out


if HAVE_NUMBA:

    @numba.njit(parallel=True, cache=True, fastmath=False)
    def _cwlt_numba(x, scales, sigma, fs, mu, J):
        nf = scales.size
        n = x.size
        out = np.zeros((nf, n), dtype=np.complex128)
        for mm in numba.prange(n):
            m = np.int64(mm)  # prange indices are unsigned; -m must not wrap
            sm = sigma[m]
            for i in range(nf):
                width = fs * scales[i] * sm
                inv_w = 1.0 / width
                omega = -2.0 * np.pi * mu / (fs * scales[i])
                j = J[i, m]
                lo = -j if j < m else -m
                hi = j if j < n - 1 - m else n - 1 - m
                acc_re = 0.0
                acc_im = 0.0
                for d in range(lo, hi + 1):
                    u = d * inv_w
                    w = np.exp(-0.5 * u * u)
                    ph = omega * d
                    c = np.cos(ph)
                    s = np.sin(ph)
                    xr = x[m + d].real
                    xi = x[m + d].imag
                    acc_re += w * (xr * c - xi * s)
                    acc_im += w * (xr * s + xi * c)
                scale = _INV_SQRT_2PI * inv_w
                out[i, m] = complex(acc_re * scale, acc_im * scale)
        return out


def cwlt_numba(x, scales, sigma, fs, mu, half_width):
    if not HAVE_NUMBA:
        raise RuntimeError("numba is not installed")
    J = _half_widths(scales, sigma, fs, half_width)
    return _cwlt_numba(
        np.ascontiguousarray(x, dtype=np.complex128),
        np.ascontiguousarray(scales, dtype=np.float64),
        np.ascontiguousarray(sigma, dtype=np.float64),
        float(fs),
        float(mu),
        J,
    )


def backend_name() -> str:
    return "numba" if HAVE_NUMBA and not _env_disabled() else "numpy"


def cwlt_sum(x, scales, sigma, fs, mu, half_width, backend: str | None = None):
    backend = backend or backend_name()
    if backend == "numba":
        return cwlt_numba(x, scales, sigma, fs, mu, half_width)
    if backend == "numpy":
        return cwlt_numpy(x, scales, sigma, fs, mu, half_width)
    raise ValueError(f"unknown backend {backend!r}")
