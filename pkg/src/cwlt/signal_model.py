"""Analytic multicomponent AM-FM signals, sampling and additive noise.

Phases are kept in cycles: a component is ``A(t) exp(i 2 pi phi(t))`` and its
instantaneous frequency is ``phi'(t)`` in Hz.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

Fn = Callable[[np.ndarray], np.ndarray]

# Noise PRNG: PCG64 through numpy's Generator, seeded directly.
NOISE_BITGEN = "PCG64"


def _const(value: float) -> Fn:
    return lambda t: np.full(np.shape(t), float(value))


@dataclass(frozen=True)
class ComponentSpec:
    amplitude: Fn
    phase: Fn
    ifreq: Fn
    chirp_rate: Fn
    jerk: Fn = _const(0.0)
    # derivative of the amplitude, only needed to bound its variation
    amplitude_rate: Fn | None = None

    def __call__(self, t, kind: str = "complex"):
        t = np.asarray(t, dtype=float)
        amp = np.asarray(self.amplitude(t), dtype=float)
        ph = np.asarray(self.phase(t), dtype=float)
        if kind == "real":
            return amp * np.cos(2.0 * np.pi * ph)
        return amp * np.exp(2j * np.pi * ph)


@dataclass(frozen=True)
class MulticomponentSpec:
    components: tuple[ComponentSpec, ...]
    interval: tuple[float, float]
    name: str = "custom"

    def __post_init__(self):
        t0, t1 = self.interval
        if not (np.isfinite(t0) and np.isfinite(t1) and t1 > t0):
            raise ValueError(f"degenerate interval {self.interval!r}")
        object.__setattr__(self, "components", tuple(self.components))

    @property
    def K(self) -> int:
        return len(self.components)

    def ifreqs(self, t) -> np.ndarray:
        """``[K, len(t)]`` matrix of instantaneous frequencies."""
        t = np.asarray(t, dtype=float)
        return np.array([np.broadcast_to(c.ifreq(t), t.shape) for c in self.components], dtype=float)

    def chirp_rates(self, t) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        return np.array([np.broadcast_to(c.chirp_rate(t), t.shape) for c in self.components], dtype=float)

    def jerks(self, t) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        return np.array([np.broadcast_to(c.jerk(t), t.shape) for c in self.components], dtype=float)

    def amplitudes(self, t) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        return np.array([np.broadcast_to(c.amplitude(t), t.shape) for c in self.components], dtype=float)

    def components_at(self, t, kind: str = "complex") -> np.ndarray:
        """Ground-truth component waveforms, ``[K, len(t)]``."""
        return np.array([c(t, kind) for c in self.components])

    def is_ordered(self, n: int = 1000) -> bool:
        """Check ``phi'_{k-1}(t) < phi'_k(t)`` on an ``n``-point grid."""
        t = np.linspace(*self.interval, n)
        f = self.ifreqs(t)
        return bool(np.all(f > 0) and np.all(np.diff(f, axis=0) > 0))


@dataclass(frozen=True)
class SampledSignal:
    samples: np.ndarray
    sample_rate: float
    t_start: float = 0.0
    kind: str = "complex"
    meta: dict | None = None

    def __post_init__(self):
        x = np.asarray(self.samples)
        if x.ndim != 1 or x.size < 8:
            raise ValueError("a sampled signal needs at least 8 samples")
        if not self.sample_rate > 0:
            raise ValueError(f"sample_rate must be positive, got {self.sample_rate!r}")
        if self.kind not in ("real", "complex"):
            raise ValueError(f"kind must be 'real' or 'complex', got {self.kind!r}")
        x = x.astype(np.float64 if self.kind == "real" else np.complex128)
        x.setflags(write=False)
        object.__setattr__(self, "samples", x)
        object.__setattr__(self, "meta", dict(self.meta or {}))

    @property
    def n(self) -> int:
        return self.samples.size

    @property
    def times(self) -> np.ndarray:
        return self.t_start + np.arange(self.n) / self.sample_rate

    def with_samples(self, samples, **meta) -> "SampledSignal":
        return SampledSignal(samples, self.sample_rate, self.t_start, self.kind, {**self.meta, **meta})


def sample(spec: MulticomponentSpec, n: int, kind: str = "real") -> SampledSignal:
    """Sample ``spec`` at ``n`` points ``t_m = t_start + m / Fs`` with ``Fs = n / duration``."""
    if n < 8:
        raise ValueError(f"n must be >= 8, got {n}")
    t0, t1 = spec.interval
    fs = n / (t1 - t0)
    t = t0 + np.arange(n) / fs
    with np.errstate(all="ignore"):
        parts = spec.components_at(t, kind)
    if not np.all(np.isfinite(parts)):
        raise FloatingPointError("component amplitude or phase is not finite on the sampling grid")
    x = parts.sum(axis=0) if spec.K else np.zeros(n)
    return SampledSignal(x, fs, t0, kind, {"spec_name": spec.name})


def add_noise(sig: SampledSignal, snr_db: float, seed: int = 0) -> SampledSignal:
    """Add white Gaussian noise at the requested SNR (power ratio, in dB).

    The noise variance is ``mean(|x|^2) * 10^(-snr_db/10)``; complex signals
    get circular noise split evenly between real and imaginary parts.
    ``snr_db = inf`` returns the signal unchanged.
    """
    if np.isposinf(snr_db):
        return sig.with_samples(sig.samples, snr_db=snr_db, seed=seed)
    if not np.isfinite(snr_db):
        raise ValueError(f"snr_db must be finite or +inf, got {snr_db!r}")
    p_sig = float(np.mean(np.abs(sig.samples) ** 2))
    if p_sig == 0.0:
        raise ValueError("SNR is undefined for an all-zero signal")
    var = p_sig * 10.0 ** (-snr_db / 10.0)
    rng = np.random.Generator(np.random.PCG64(seed))
    if sig.kind == "real":
        noise = rng.normal(0.0, np.sqrt(var), sig.n)
    else:
        scale = np.sqrt(var / 2.0)
        noise = rng.normal(0.0, scale, sig.n) + 1j * rng.normal(0.0, scale, sig.n)
    return sig.with_samples(sig.samples + noise, snr_db=snr_db, seed=seed)


def linear_chirp(c: float, r: float, amplitude: float = 1.0) -> ComponentSpec:
    """``A exp(i 2 pi (c t + r t^2 / 2))``: IF ``c + r t``, chirp rate ``r``."""
    return ComponentSpec(
        amplitude=_const(amplitude),
        phase=lambda t: c * t + 0.5 * r * np.square(t),
        ifreq=lambda t: c + r * np.asarray(t, dtype=float),
        chirp_rate=_const(r),
        jerk=_const(0.0),
        amplitude_rate=_const(0.0),
    )


def tone(f: float, amplitude: float = 1.0) -> ComponentSpec:
    return linear_chirp(f, 0.0, amplitude)


def sinusoidal_fm(carrier: float, index: float, mod_freq: float, amplitude: float = 1.0) -> ComponentSpec:
    """``A cos(2 pi carrier t + index cos(2 pi mod_freq t))`` with index in radians."""
    w = 2.0 * np.pi * mod_freq
    dev = index * mod_freq  # peak frequency deviation, Hz
    return ComponentSpec(
        amplitude=_const(amplitude),
        phase=lambda t: carrier * t + index / (2.0 * np.pi) * np.cos(w * t),
        ifreq=lambda t: carrier - dev * np.sin(w * t),
        chirp_rate=lambda t: -dev * w * np.cos(w * t),
        jerk=lambda t: dev * w * w * np.sin(w * t),
        amplitude_rate=_const(0.0),
    )


def two_chirp() -> MulticomponentSpec:
    """``cos(2 pi (12 t + 5 t^2)) + cos(2 pi (34 t + 30 t^2))`` on [0, 1]."""
    return MulticomponentSpec((linear_chirp(12.0, 10.0), linear_chirp(34.0, 60.0)), (0.0, 1.0), "two_chirp")


def three_mode() -> MulticomponentSpec:
    """One harmonic and two sinusoidal-FM modes on [0, 1].

    ``cos(60 pi t) + 2/3 cos(96 pi t + 4 cos(3 pi t)) + 1/2 cos(148 pi t + 3 cos(3 pi t))``;
    IFs 30, ``48 - 6 sin(3 pi t)`` and ``74 - 4.5 sin(3 pi t)`` Hz.
    """
    return MulticomponentSpec(
        (
            tone(30.0),
            sinusoidal_fm(48.0, 4.0, 1.5, 2.0 / 3.0),
            sinusoidal_fm(74.0, 3.0, 1.5, 0.5),
        ),
        (0.0, 1.0),
        "three_mode",
    )


BUILTINS = {"two_chirp": two_chirp, "three_mode": three_mode}
# samples used by the reference experiments
BUILTIN_N = {"two_chirp": 256, "three_mode": 512}


def builtin(name: str) -> MulticomponentSpec:
    key = name.replace("-", "_")
    if key not in BUILTINS:
        raise KeyError(f"unknown built-in signal {name!r}; choose from {sorted(BUILTINS)}")
    return BUILTINS[key]()


def from_components(components: Sequence[ComponentSpec], interval, name="custom") -> MulticomponentSpec:
    return MulticomponentSpec(tuple(components), tuple(map(float, interval)), name)
