"""Gaussian window mathematics.

The transform uses the Gaussian window ``g(t) = exp(-t^2/2)/sqrt(2*pi)`` with
Fourier transform ``ghat(xi) = exp(-2 pi^2 xi^2)``.  The chirp-modulated
transform ``G(xi, lam)`` is the Fourier transform of ``exp(i pi lam t^2) g(t)``.
Only the Gaussian ships; the monotonicity predicates at the bottom describe
what any replacement window has to satisfy.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

SQRT_2PI = np.sqrt(2.0 * np.pi)

# closed-form absolute moments int |t^n g(t)| dt of the Gaussian
_MOMENTS = {
    1: np.sqrt(2.0 / np.pi),
    2: 1.0,
    3: 2.0 * np.sqrt(2.0 / np.pi),
}


def alpha_of_tau0(tau0: float) -> float:
    """Essential-support radius: the ``alpha >= 0`` with ``ghat(alpha) = tau0``."""
    if not 0.0 < tau0 < 1.0:
        raise ValueError(f"tau0 must lie in (0, 1), got {tau0!r}")
    return float(np.sqrt(2.0 * np.log(1.0 / tau0)) / (2.0 * np.pi))


@dataclass(frozen=True)
class WindowSpec:
    """Modulation frequency ``mu`` and support threshold ``tau0`` of the wavelet."""

    mu: float = 1.0
    tau0: float = 0.125
    alpha: float = field(init=False)

    def __post_init__(self):
        if not self.mu > 0:
            raise ValueError(f"mu must be positive, got {self.mu!r}")
        object.__setattr__(self, "alpha", alpha_of_tau0(self.tau0))


def g(t):
    return np.exp(-0.5 * np.square(t)) / SQRT_2PI


def g_hat(xi):
    return np.exp(-2.0 * np.pi**2 * np.square(xi))


def g_hat_inverse(y):
    """Inverse of ``ghat`` on ``xi >= 0`` for ``0 < y <= 1``."""
    y = np.asarray(y, dtype=float)
    if np.any((y <= 0) | (y > 1)):
        raise ValueError("g_hat_inverse requires 0 < y <= 1")
    return np.sqrt(-np.log(y)) / (np.pi * np.sqrt(2.0))


def G(xi, lam):
    """Fourier transform of ``exp(i pi lam t^2) g(t)`` evaluated at ``xi``.

    ``lam`` is the dimensionless chirp parameter ``phi'' a^2 sigma^2``.
    The square root is the principal branch; its radicand has real part 1,
    so the result is continuous in ``lam``.
    """
    xi = np.asarray(xi, dtype=float)
    two_pi_lam = 2.0 * np.pi * np.asarray(lam, dtype=float)
    expo = -2.0 * np.pi**2 * xi**2 * (1.0 + 1j * two_pi_lam) / (1.0 + two_pi_lam**2)
    return np.exp(expo) / np.sqrt(1.0 - 1j * two_pi_lam)


def G_abs(xi, lam):
    two_pi_lam_sq = (2.0 * np.pi * np.asarray(lam, dtype=float)) ** 2
    xi = np.asarray(xi, dtype=float)
    return (1.0 + two_pi_lam_sq) ** -0.25 * np.exp(-2.0 * np.pi**2 * xi**2 / (1.0 + two_pi_lam_sq))


def G_peak(lam):
    """``|G(0, lam)| = (1 + (2 pi lam)^2)^(-1/4)``."""
    return (1.0 + (2.0 * np.pi * np.asarray(lam, dtype=float)) ** 2) ** -0.25


def chirp_gain(lam):
    """Reciprocal of the kernel peak, ``(1 + (2 pi lam)^2)^(1/4) >= 1``."""
    return (1.0 + (2.0 * np.pi * np.asarray(lam, dtype=float)) ** 2) ** 0.25


def chirp_correction(lam):
    """Complex factor ``sqrt(1 - i 2 pi lam) = 1 / G(0, lam)``."""
    return np.sqrt(1.0 - 2j * np.pi * np.asarray(lam, dtype=float))


def G_magnitude_inverse(y, lam):
    """Return ``xi >= 0`` with ``|G(xi, lam)| = y``.

    Valid for ``0 < y < |G(0, lam)|``.
    """
    y = np.asarray(y, dtype=float)
    peak = G_peak(lam)
    if np.any(y <= 0) or np.any(y >= peak):
        raise ValueError("G_magnitude_inverse requires 0 < y < |G(0, lam)|")
    return np.sqrt(-np.log(y / peak)) / (np.pi * np.sqrt(2.0) * peak**2)


def moment_In(n: int) -> float:
    try:
        return float(_MOMENTS[n])
    except KeyError:
        raise ValueError(f"moment_In supports n in (1, 2, 3), got {n!r}") from None


def magnitude_decreasing(fn, xi_grid) -> bool:
    """True when ``|fn(xi)|`` is strictly decreasing over the ascending grid."""
    vals = np.abs(fn(np.asarray(xi_grid, dtype=float)))
    return bool(np.all(np.diff(vals) < 0))


def satisfies_window_assumptions(xi_max=4.0, n=2001, lams=(0.0, 0.1, -0.1, 1.0, -1.0, 10.0, -10.0)) -> bool:
    """Check the two monotonicity properties the separation theory relies on.

    ``|ghat|`` must decrease in ``|xi|`` and so must ``|G(., lam)|`` for every
    chirp parameter in ``lams``.
    """
    xi = np.linspace(0.0, xi_max, n)
    if not magnitude_decreasing(g_hat, xi):
        return False
    return all(magnitude_decreasing(lambda x, lam=lam: G_abs(x, lam), xi) for lam in lams)
