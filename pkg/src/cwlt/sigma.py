"""Time-varying window parameter selection.

``sigma1`` is the smallest width that keeps the sinusoidal-model zones of
adjacent components apart; ``sigma2`` does the same for the chirp-widened
zones.  Both read the true IFs and chirp rates from the signal spec.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .signal_model import MulticomponentSpec
from .transform import SigmaProfile
from .window import WindowSpec


class CrossoverError(ValueError):
    """Adjacent instantaneous frequencies coincide on the time grid."""


class NotSeparableError(ValueError):
    """The chirp-model separability discriminant is negative."""


def _pair_ratio(f_lo, f_hi, window: WindowSpec, times):
    gap = f_hi - f_lo
    if np.any(gap == 0):
        m = int(np.flatnonzero(gap == 0)[0])
        raise CrossoverError(f"adjacent IFs cross at t={times[m]:.6g}")
    return window.alpha / window.mu * (f_hi + f_lo) / gap


def sigma1_values(spec: MulticomponentSpec, window: WindowSpec, times) -> np.ndarray:
    times = np.atleast_1d(np.asarray(times, dtype=float))
    if spec.K < 2:
        return np.full(times.shape, window.alpha / window.mu)
    f = spec.ifreqs(times)
    pairs = [_pair_ratio(f[k - 1], f[k], window, times) for k in range(1, spec.K)]
    return np.max(pairs, axis=0)


def sigma1(spec: MulticomponentSpec, window: WindowSpec, times) -> SigmaProfile:
    """``max_k (alpha/mu) (phi'_k + phi'_{k-1}) / (phi'_k - phi'_{k-1})``; ``alpha/mu`` when K = 1."""
    return SigmaProfile(sigma1_values(spec, window, times), "sigma1")


def sigma2_pair(f_lo, f_hi, c_lo, c_hi, window: WindowSpec, clamp_upsilon=False, times=None):
    """Smallest separating width for one adjacent pair (lower / higher IF).

    Returns the smaller root ``(beta - sqrt(Upsilon)) / (2 alpha_k)`` of the
    pair's separation quadratic, or the sinusoidal ratio where both chirp
    rates vanish.  The root is evaluated as
    ``(beta^2 - Upsilon) / (2 alpha_k (beta + sqrt(Upsilon)))`` with the
    numerator expanded, which avoids cancellation for small chirp rates.
    """
    alpha, mu = window.alpha, window.mu
    f_lo, f_hi, c_lo, c_hi = np.broadcast_arrays(*(np.asarray(v, dtype=float) for v in (f_lo, f_hi, c_lo, c_hi)))
    times = np.arange(f_lo.size) if times is None else np.asarray(times)
    ab_lo, ab_hi = np.abs(c_lo), np.abs(c_hi)
    S = ab_lo + ab_hi
    P = f_hi * ab_lo + f_lo * ab_hi
    gap = f_hi - f_lo
    D = c_hi**2 - c_lo**2
    a_k = 2.0 * np.pi * alpha * mu * S**2
    beta = P * gap + 4.0 * np.pi * alpha**2 * D
    upsilon = P**2 * (gap**2 - 16.0 * np.pi * alpha**2 * S)

    # S**2 can underflow for denormal rates; treat those as chirp-free
    chirpy = a_k > 0
    bad = chirpy & (upsilon < 0)
    if np.any(bad) and not clamp_upsilon:
        m = int(np.flatnonzero(bad)[0])
        raise NotSeparableError(f"Upsilon < 0 at t={times.flat[m]:.6g} (set clamp_upsilon to clamp)")
    ups = np.where(bad, 0.0, upsilon)
    num = np.where(
        bad,
        beta**2,
        8.0 * np.pi * alpha**2 * P * gap * D + 16.0 * np.pi**2 * alpha**4 * D**2 + 16.0 * np.pi * alpha**2 * P**2 * S,
    )
    root = np.sqrt(ups)
    den = 2.0 * a_k * (beta + root)
    with np.errstate(divide="ignore", invalid="ignore"):
        stable = num / den
        naive = (beta - root) / (2.0 * a_k)
    val = np.where(den > 0, stable, naive)
    if np.any(~chirpy):
        with np.errstate(divide="ignore"):
            sin_val = alpha / mu * (f_hi + f_lo) / gap
        val = np.where(chirpy, val, sin_val)
    return val, upsilon


def sigma2_values(spec: MulticomponentSpec, window: WindowSpec, times, clamp_upsilon=False) -> np.ndarray:
    times = np.atleast_1d(np.asarray(times, dtype=float))
    floor = np.full(times.shape, window.alpha / window.mu)
    if spec.K < 2:
        return floor
    f = spec.ifreqs(times)
    c = spec.chirp_rates(times)
    out = floor
    for k in range(1, spec.K):
        if np.any(f[k] == f[k - 1]):
            _pair_ratio(f[k - 1], f[k], window, times)
        try:
            val, _ = sigma2_pair(f[k - 1], f[k], c[k - 1], c[k], window, clamp_upsilon, times)
        except NotSeparableError as exc:
            raise NotSeparableError(f"pair ({k}, {k + 1}): {exc}") from None
        out = np.maximum(out, val)
    return out


def sigma2(spec: MulticomponentSpec, window: WindowSpec, times, clamp_upsilon=False) -> SigmaProfile:
    """Chirp-model optimal width, floored at ``alpha/mu``."""
    return SigmaProfile(sigma2_values(spec, window, times, clamp_upsilon), "sigma2")


def constant(value: float, times) -> SigmaProfile:
    if not value > 0:
        raise ValueError(f"constant sigma must be positive, got {value!r}")
    n = np.size(times) if np.ndim(times) else int(times)
    return SigmaProfile(np.full(n, float(value)), f"const:{value:g}")


@dataclass(frozen=True)
class SigmaRequest:
    mode: str = "sigma2"
    constant_value: float | None = None
    clamp_upsilon: bool = False

    @classmethod
    def parse(cls, text: str, clamp_upsilon=False) -> "SigmaRequest":
        """Parse the CLI form ``const:<v> | sigma1 | sigma2``."""
        text = text.strip()
        if text.startswith("const:"):
            try:
                value = float(text[6:])
            except ValueError:
                raise ValueError(f"bad constant sigma {text!r}") from None
            if not value > 0:
                raise ValueError(f"constant sigma must be positive, got {value!r}")
            return cls("constant", value, clamp_upsilon)
        if text in ("sigma1", "sigma2"):
            return cls(text, None, clamp_upsilon)
        raise ValueError(f"sigma must be const:<v>, sigma1 or sigma2, got {text!r}")

    def __str__(self):
        return f"const:{self.constant_value:g}" if self.mode == "constant" else self.mode

    def profile(self, times, spec: MulticomponentSpec | None = None, window: WindowSpec | None = None) -> SigmaProfile:
        window = window or WindowSpec()
        if self.mode == "constant":
            return constant(self.constant_value, np.asarray(times))
        if spec is None:
            raise ValueError(f"sigma mode {self.mode!r} needs the ground-truth signal spec")
        if self.mode == "sigma1":
            return sigma1(spec, window, times)
        return sigma2(spec, window, times, self.clamp_upsilon)
