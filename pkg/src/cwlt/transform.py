"""Adaptive continuous wavelet-like transform (CWLT) on a frequency x time grid."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .signal_model import SampledSignal
from .window import WindowSpec

# window truncation, in units of t / sigma; g(6) < 7e-9
DEFAULT_HALF_WIDTH = 6.0


@dataclass(frozen=True)
class FrequencyGrid:
    """Ascending, linearly spaced analysis frequencies ``xi_i`` (Hz)."""

    freqs: np.ndarray

    def __post_init__(self):
        f = np.asarray(self.freqs, dtype=float)
        if f.ndim != 1 or f.size == 0:
            raise ValueError("frequency grid is empty")
        if f[0] <= 0 or np.any(np.diff(f) <= 0):
            raise ValueError("frequencies must be positive and strictly ascending")
        f.setflags(write=False)
        object.__setattr__(self, "freqs", f)

    @property
    def n_freq(self) -> int:
        return self.freqs.size

    @property
    def spacing(self) -> float:
        return float(self.freqs[1] - self.freqs[0]) if self.n_freq > 1 else 0.0

    def scales(self, mu: float) -> np.ndarray:
        return mu / self.freqs

    def nearest(self, f) -> np.ndarray:
        """Index of the grid frequency closest to ``f`` (lower index on ties)."""
        f = np.asarray(f, dtype=float)
        return np.abs(self.freqs[:, None] - f.reshape(1, -1)).argmin(axis=0).reshape(f.shape)


@dataclass(frozen=True)
class SigmaProfile:
    """Per-sample window parameter ``sigma(t_m) > 0``."""

    sigma: np.ndarray
    label: str = "custom"

    def __post_init__(self):
        s = np.atleast_1d(np.asarray(self.sigma, dtype=float)).copy()
        if s.ndim != 1 or s.size == 0:
            raise ValueError("sigma profile must be a non-empty 1-D sequence")
        if not np.all(np.isfinite(s)) or np.any(s <= 0):
            raise ValueError("sigma must be finite and strictly positive")
        s.setflags(write=False)
        object.__setattr__(self, "sigma", s)

    def __len__(self):
        return self.sigma.size


@dataclass(frozen=True)
class TFRepresentation:
    values: np.ndarray
    grid: FrequencyGrid
    sigma: SigmaProfile
    window: WindowSpec
    sample_rate: float
    t_start: float = 0.0
    source_meta: dict = field(default_factory=dict)

    def __post_init__(self):
        v = np.asarray(self.values)
        if v.shape != (self.grid.n_freq, len(self.sigma)):
            raise ValueError(f"values shape {v.shape} does not match grid x sigma")

    @property
    def n_time(self) -> int:
        return self.values.shape[1]

    @property
    def times(self) -> np.ndarray:
        return self.t_start + np.arange(self.n_time) / self.sample_rate

    @property
    def scales(self) -> np.ndarray:
        return self.grid.scales(self.window.mu)

    def scaled(self, c) -> "TFRepresentation":
        return TFRepresentation(self.values * c, self.grid, self.sigma, self.window,
                                self.sample_rate, self.t_start, dict(self.source_meta))


def default_grid(sig: SampledSignal, n_freq: int = 256) -> FrequencyGrid:
    """``n_freq`` linear bins from ``Fs/N`` to ``0.98 * Fs/2``."""
    if n_freq < 16:
        raise ValueError(f"n_freq must be >= 16, got {n_freq}")
    fs = sig.sample_rate
    return FrequencyGrid(np.linspace(fs / sig.n, 0.98 * fs / 2.0, n_freq))


def transform(
    sig: SampledSignal,
    grid: FrequencyGrid,
    sigma: SigmaProfile,
    window: WindowSpec | None = None,
    half_width: float = DEFAULT_HALF_WIDTH,
    backend: str | None = None,
) -> TFRepresentation:
    """Compute ``W[i, m] = W(mu / xi_i, t_m)`` by truncated Riemann summation.

    After substituting ``u = b + a t`` the defining integral becomes
    ``(1/(a s)) int x(u) g((u-b)/(a s)) exp(-i 2 pi mu (u-b)/a) du``, summed at
    the native sampling grid with ``du = 1/Fs``.  Samples outside the record
    count as zero.
    """
    window = window or WindowSpec()
    if len(sigma) != sig.n:
        raise ValueError(f"sigma has {len(sigma)} entries, signal has {sig.n}")
    if grid.freqs[-1] > sig.sample_rate / 2.0:
        raise ValueError("grid extends beyond the Nyquist frequency")
    if not half_width > 0:
        raise ValueError("half_width must be positive")
    values = _kernels.cwlt_sum(sig.samples, grid.scales(window.mu), sigma.sigma,
                               sig.sample_rate, window.mu, half_width, backend)
    meta = dict(sig.meta)
    meta.update(kind=sig.kind, half_width=half_width)
    return TFRepresentation(values, grid, sigma, window, sig.sample_rate, sig.t_start, meta)


def interior_columns(tf: TFRepresentation, n_std: float = 5.0, scales=None) -> np.ndarray:
    """Columns whose window (``n_std`` standard deviations) stays inside the record.

    By default the widest grid scale is used.  ``scales`` may instead give a
    per-column scale (shape ``[n_time]``) or several tracks (``[K, n_time]``,
    e.g. ridge scales), in which case every track must stay inside.
    """
    a = tf.scales.max() if scales is None else np.max(np.atleast_2d(scales), axis=0)
    reach = n_std * a * tf.sigma.sigma  # seconds
    t = tf.times
    t_end = tf.t_start + (tf.n_time - 1) / tf.sample_rate
    return (t - reach >= tf.t_start) & (t + reach <= t_end)
