"""Component recovery by reading the transform on a ridge."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .ridges import RidgeSet
from .transform import TFRepresentation
from .window import chirp_correction


@dataclass(frozen=True)
class RecoveredComponent:
    values: np.ndarray
    model: str
    k: int
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        if not np.all(np.isfinite(self.values)):
            raise FloatingPointError(f"recovered component {self.k} has non-finite entries")

    def __len__(self):
        return self.values.size


def _check(tf: TFRepresentation, ridge: RidgeSet, k: int, kind: str):
    if kind not in ("real", "complex"):
        raise ValueError(f"kind must be 'real' or 'complex', got {kind!r}")
    if not 0 <= k < ridge.K:
        raise ValueError(f"component index {k} out of range for K={ridge.K}")
    if ridge.n_time != tf.n_time or ridge.idx.max() >= tf.grid.n_freq:
        raise ValueError("ridge and transform do not share a time/frequency grid")
    if not np.array_equal(tf.grid.freqs[ridge.idx[k]], ridge.if_est[k]):
        raise ValueError("ridge frequencies are not on the transform's grid")


def ridge_values(tf: TFRepresentation, ridge: RidgeSet, k: int) -> np.ndarray:
    """``W(a_k(t_m), t_m)`` for every column."""
    return tf.values[ridge.idx[k], np.arange(tf.n_time)]


def _finish(w, kind):
    return 2.0 * w.real if kind == "real" else w


def recover_sinusoidal(tf: TFRepresentation, ridge: RidgeSet, k: int, kind: str = "real") -> RecoveredComponent:
    """``W(a_k, b)`` for complex input, ``2 Re W(a_k, b)`` for real input."""
    _check(tf, ridge, k, kind)
    w = ridge_values(tf, ridge, k)
    return RecoveredComponent(_finish(w, kind), "sinusoidal", k, {"ridge_model": ridge.model})


def correction_factor(tf: TFRepresentation, ridge: RidgeSet, k: int) -> np.ndarray:
    """``sqrt(1 - i 2 pi phi''_k a_k^2 sigma^2)`` along ridge ``k`` (principal branch)."""
    if ridge.chirp_est is None:
        raise ValueError("ridge has no chirp-rate estimates; run estimate_chirp_rate first")
    lam = ridge.chirp_est[k] * ridge.a_hat[k] ** 2 * tf.sigma.sigma**2
    return chirp_correction(lam)


def recover_chirp(tf: TFRepresentation, ridge: RidgeSet, k: int, kind: str = "real") -> RecoveredComponent:
    _check(tf, ridge, k, kind)
    corr = correction_factor(tf, ridge, k)
    w = ridge_values(tf, ridge, k)
    # exactly 1 where the chirp rate is zero, so this matches the sinusoidal readout bitwise
    w = np.where(corr == 1.0, w, corr * w)
    return RecoveredComponent(_finish(w, kind), "chirp", k, {"ridge_model": ridge.model})


def recover_all(tf: TFRepresentation, ridge: RidgeSet, model: str = "sinusoidal", kind: str = "real"):
    fn = recover_chirp if model == "chirp" else recover_sinusoidal
    return [fn(tf, ridge, k, kind) for k in range(ridge.K)]
