"""Numerical laboratory for a mechanotaxis cell-migration model.

Conservative finite-volume solver for the drift-diffusion equation
rho_t = D (v(S)^2 (rho_x + rho (ln(alpha v^2 + v))_x))_x coupled to the
elliptic signal equation -Ds S_xx + S = rho on a periodic interval, plus
linear-stability analytics, semi-analytic periodic steady states,
entropy/free-energy diagnostics, and a run-and-tumble particle cross-check.
"""

__version__ = "0.1.0"

from .errors import (
    ConfigError,
    FitWindowTooShort,
    InconclusiveProbe,
    InsufficientSamples,
    MechanosimError,
    NoFinitePeriod,
    NotSteady,
    PositivityLoss,
)
from .fv import InitSpec, MacroConfig, Trajectory, build_initial, growth_rate_probe, run, step
from .grid import Field, Grid, integrate, shift
from .signal import ConvolutionKernel, SignalParams, convolve, fourier_symbol, solve_signal
from .velocity import CustomLaw, MobilityParams, RationalLaw, SigmoidLaw, VelocityLaw

__all__ = [
    "__version__",
    "Grid", "Field", "integrate", "shift",
    "VelocityLaw", "RationalLaw", "SigmoidLaw", "CustomLaw", "MobilityParams",
    "SignalParams", "ConvolutionKernel", "solve_signal", "convolve", "fourier_symbol",
    "MacroConfig", "InitSpec", "Trajectory", "run", "step", "build_initial",
    "growth_rate_probe",
    "MechanosimError", "ConfigError", "PositivityLoss", "FitWindowTooShort",
    "NoFinitePeriod", "NotSteady", "InsufficientSamples", "InconclusiveProbe",
]
