import os

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile("default", max_examples=40, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@pytest.fixture(scope="session")
def window():
    from cwlt.window import WindowSpec
    return WindowSpec()


@pytest.fixture(scope="session")
def two_chirp_sigma2():
    """Real two-chirp signal, sigma2 profile, default grid, transform."""
    from cwlt.sigma import sigma2
    from cwlt.signal_model import builtin, sample
    from cwlt.transform import default_grid, transform
    from cwlt.window import WindowSpec

    spec = builtin("two_chirp")
    sig = sample(spec, 256, "real")
    w = WindowSpec()
    prof = sigma2(spec, w, sig.times)
    tf = transform(sig, default_grid(sig, 256), prof, w)
    return spec, sig, tf
