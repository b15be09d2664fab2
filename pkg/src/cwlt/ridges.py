"""Ridge extraction: zone partition of each column, per-zone argmax, chirp-rate estimation."""
from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np
from scipy.ndimage import median_filter

from .transform import TFRepresentation
from .window import chirp_gain

MODELS = ("sinusoidal", "chirp")


class ExtractionError(RuntimeError):
    pass


@dataclass(frozen=True)
class RidgeSet:
    """K ridge tracks over time.

    ``idx`` holds grid indices, so ``a_hat = mu / freqs[idx]`` and
    ``if_est = freqs[idx]`` exactly.  ``missing`` flags columns that were
    filled by interpolation rather than read off the mask.
    """

    idx: np.ndarray
    a_hat: np.ndarray
    if_est: np.ndarray
    model: str
    threshold_used: np.ndarray
    missing: np.ndarray
    sample_rate: float
    mu: float
    chirp_est: np.ndarray | None = None

    @property
    def K(self) -> int:
        return self.idx.shape[0]

    @property
    def n_time(self) -> int:
        return self.idx.shape[1]


def _runs(mask: np.ndarray) -> list[tuple[int, int]]:
    """Inclusive ``(start, stop)`` index pairs of the True runs in ``mask``."""
    padded = np.concatenate(([False], mask, [False]))
    edges = np.flatnonzero(np.diff(padded.astype(np.int8)))
    return [(int(a), int(b) - 1) for a, b in zip(edges[::2], edges[1::2])]


def _split_widest(runs, mag):
    """Split the widest splittable run at its deepest interior local minimum."""
    order = sorted(range(len(runs)), key=lambda r: runs[r][1] - runs[r][0], reverse=True)
    for r in order:
        lo, hi = runs[r]
        if hi - lo < 2:
            continue
        seg = mag[lo : hi + 1]
        inner = np.arange(1, seg.size - 1)
        is_min = (seg[inner] <= seg[inner - 1]) & (seg[inner] <= seg[inner + 1])
        cand = inner[is_min]
        if cand.size == 0:
            continue
        cut = lo + int(cand[np.argmin(seg[cand])])
        # the minimum bin itself belongs to neither side
        parts = [p for p in ((lo, cut - 1), (cut + 1, hi)) if p[1] >= p[0]]
        if len(parts) < 2:
            continue
        return runs[:r] + parts + runs[r + 1 :]
    return None


def zones_for_column(mag: np.ndarray, mask: np.ndarray, K: int):
    """Pick exactly K frequency-ordered runs, or None when that is impossible."""
    runs = _runs(mask)
    if not runs:
        return None
    if len(runs) > K:
        peaks = [mag[a : b + 1].max() for a, b in runs]
        keep = sorted(np.argsort(peaks, kind="stable")[::-1][:K])
        runs = [runs[i] for i in keep]
    while len(runs) < K:
        runs = _split_widest(runs, mag)
        if runs is None:
            return None
    return runs


def _zone_peak(score, lo, nf):
    """Offset of the zone maximum (first one on ties, i.e. lowest frequency).

    A maximum on the first or last grid bin is only accepted when the zone has
    no interior local maximum: near Nyquist the sampled kernel picks up the
    aliased negative-frequency image of a real signal, and that shows up as a
    rising edge rather than a ridge.
    """
    best = int(np.argmax(score))
    at_edge = (lo + best == 0) or (lo + best == nf - 1)
    if not at_edge or score.size < 3:
        return best
    inner = np.arange(1, score.size - 1)
    peaks = inner[(score[inner] >= score[inner - 1]) & (score[inner] >= score[inner + 1])]
    if peaks.size == 0:
        return best
    return int(peaks[np.argmax(score[peaks])])


def threshold_set(tf: TFRepresentation, rel_threshold: float = 0.2):
    """Per-column relative threshold mask and the absolute thresholds used."""
    if not 0.0 < rel_threshold < 1.0:
        raise ValueError(f"rel_threshold must lie in (0, 1), got {rel_threshold!r}")
    mag = np.abs(tf.values)
    thr = rel_threshold * mag.max(axis=0)
    mask = mag > thr[None, :]
    return mask, thr


def _fill_missing(idx, missing, freqs):
    """Interpolate IFs linearly across missing columns and snap to the grid."""
    out = idx.copy()
    t = np.arange(idx.shape[1])
    for k in range(idx.shape[0]):
        good = ~missing[k]
        if good.all():
            continue
        f = np.interp(t, t[good], freqs[idx[k, good]])
        snapped = np.abs(freqs[:, None] - f[None, :]).argmin(axis=0)
        out[k, ~good] = snapped[~good]
    return out


def extract(
    tf: TFRepresentation,
    K: int,
    rel_threshold: float = 0.2,
    model: str = "sinusoidal",
    chirp_rates=None,
) -> RidgeSet:
    """Extract K ridges from ``tf``.

    ``model="chirp"`` weights ``|W(a, b)|`` by ``(1 + (2 pi phi''_k a^2 sigma^2)^2)^(1/4)``
    inside zone ``k``, i.e. divides by ``|G_k(0, a, b)|``; ``chirp_rates`` is a
    ``[K, n_time]`` array of chirp-rate values (true or estimated).  Without
    ``chirp_rates`` the chirp model has nothing to correct and reduces to the
    sinusoidal one.
    """
    if K < 1:
        raise ValueError(f"K must be >= 1, got {K}")
    if model not in MODELS:
        raise ValueError(f"model must be one of {MODELS}, got {model!r}")
    n = tf.n_time
    if chirp_rates is not None:
        chirp_rates = np.broadcast_to(np.asarray(chirp_rates, dtype=float), (K, n))
    mask, thr = threshold_set(tf, rel_threshold)
    if not mask.any():
        raise ExtractionError("threshold mask is empty in every column")
    mag = np.abs(tf.values)
    scales = tf.scales
    sig = tf.sigma.sigma
    nf = tf.grid.n_freq
    idx = np.zeros((K, n), dtype=np.int64)
    missing = np.zeros((K, n), dtype=bool)
    for m in range(n):
        zones = zones_for_column(mag[:, m], mask[:, m], K)
        if zones is None:
            missing[:, m] = True
            continue
        col = mag[:, m]
        for k, (lo, hi) in enumerate(zones):
            score = col[lo : hi + 1]
            if model == "chirp" and chirp_rates is not None:
                lam = chirp_rates[k, m] * scales[lo : hi + 1] ** 2 * sig[m] ** 2
                score = score * chirp_gain(lam)
            idx[k, m] = lo + _zone_peak(score, lo, nf)
    if missing.all():
        raise ExtractionError(f"no column yields {K} zones")
    if missing.any():
        idx = _fill_missing(idx, missing, tf.grid.freqs)
    f = tf.grid.freqs[idx]
    return RidgeSet(
        idx=idx,
        a_hat=tf.window.mu / f,
        if_est=f,
        model=model,
        threshold_used=thr,
        missing=missing,
        sample_rate=tf.sample_rate,
        mu=tf.window.mu,
        chirp_est=None if chirp_rates is None else np.array(chirp_rates),
    )


FIVE_POINT = np.array([1.0, -8.0, 0.0, 8.0, -1.0]) / 12.0


def five_point_derivative(y, h: float, step: int = 1) -> np.ndarray:
    """Centered five-point first derivative along the last axis.

    Samples ``step`` apart are combined, so the stencil spacing is ``step * h``.
    The ``2 * step`` samples at each end copy the nearest interior estimate.
    """
    y = np.asarray(y, dtype=float)
    n = y.shape[-1]
    if step < 1:
        raise ValueError(f"step must be >= 1, got {step}")
    if n < 4 * step + 1:
        raise ValueError(f"five-point differentiation with step {step} needs >= {4 * step + 1} samples, got {n}")
    s = step
    d = np.empty_like(y)
    d[..., 2 * s : n - 2 * s] = (
        y[..., : n - 4 * s] - 8.0 * y[..., s : n - 3 * s] + 8.0 * y[..., 3 * s : n - s] - y[..., 4 * s :]
    ) / (12.0 * s * h)
    d[..., : 2 * s] = d[..., 2 * s : 2 * s + 1]
    d[..., n - 2 * s :] = d[..., n - 2 * s - 1 : n - 2 * s]
    return d


def estimate_chirp_rate(ridge: RidgeSet, smooth: int = 1, step: int = 1) -> np.ndarray:
    """Differentiate each IF track with the five-point stencil.

    ``smooth`` is an odd moving-median length applied to the IF tracks first
    (1 disables it).  ``step`` widens the stencil to ``h = step / Fs``; the
    default is the plain per-sample stencil.  IF tracks read off a frequency
    grid are staircases, and a per-sample derivative of a staircase is mostly
    zero with spikes at the steps, so noisy or finely sampled records usually
    want a wider stencil.
    """
    if ridge.n_time < 5:
        raise ValueError("estimate_chirp_rate needs at least 5 time samples")
    if smooth < 1 or smooth % 2 == 0:
        raise ValueError(f"smooth must be a positive odd integer, got {smooth}")
    y = ridge.if_est
    if smooth > 1:
        y = median_filter(y, size=(1, smooth), mode="nearest")
    return five_point_derivative(y, 1.0 / ridge.sample_rate, step)


def two_pass_chirp_extract(
    tf: TFRepresentation, K: int, rel_threshold: float = 0.2, smooth: int = 1, step: int = 1
) -> RidgeSet:
    """Sinusoidal pass, chirp rates from its IFs, then a chirp-model pass."""
    first = extract(tf, K, rel_threshold, "sinusoidal")
    rates = estimate_chirp_rate(first, smooth, step)
    second = extract(tf, K, rel_threshold, "chirp", chirp_rates=rates)
    return replace(second, chirp_est=rates)


def with_chirp_rates(ridge: RidgeSet, chirp_rates) -> RidgeSet:
    rates = np.broadcast_to(np.asarray(chirp_rates, dtype=float), ridge.idx.shape).copy()
    return replace(ridge, chirp_est=rates)
