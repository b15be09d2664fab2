import numpy as np


def tone_tf(f, fs=256.0, n=1024, sigma=1.0, freqs=None, kind="complex", amp=1.0):
    from cwlt.signal_model import from_components, sample, tone
    from cwlt.transform import FrequencyGrid, SigmaProfile, transform

    spec = from_components([tone(f, amp)], (0.0, n / fs))
    sig = sample(spec, n, kind)
    grid = FrequencyGrid(np.linspace(4.0, 120.0, 233) if freqs is None else freqs)
    return spec, sig, transform(sig, grid, SigmaProfile(np.full(n, sigma)))
