"""Adaptive continuous wavelet-like transform (CWLT) for multicomponent signal separation."""
from .signal_model import (
    ComponentSpec,
    MulticomponentSpec,
    SampledSignal,
    add_noise,
    builtin,
    sample,
)
from .window import WindowSpec
from .transform import FrequencyGrid, SigmaProfile, TFRepresentation, default_grid, transform
from .sigma import SigmaRequest, sigma1, sigma2
from .ridges import RidgeSet, estimate_chirp_rate, extract, two_pass_chirp_extract
from .recover import RecoveredComponent, recover_chirp, recover_sinusoidal
from .experiments import ExperimentConfig, ExperimentResult, rmse, run_three_mode, run_two_chirp

__version__ = "0.1.0"
