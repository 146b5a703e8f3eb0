"""Pseudo-spectral simulator and verification suite for long-time inviscid
damping of the 2D Euler equations near Couette flow, in shear-back
coordinates."""

from .spectral import (
    GridSpec,
    PhysicalField,
    SpectralField,
    dealias,
    forward_transform,
    inverse_transform,
    project_modes,
    sobolev_norm,
)
from .dynamics import (
    BlowUpError,
    ShearFrameState,
    VelocityPair,
    cfl_dt,
    linearize_flag,
    nonlinear_term,
    solve_velocity,
    step_rk4,
)
from .diagnostics import (
    DecayFit,
    DiagnosticsRecord,
    boundary_guard,
    fit_decay,
    record,
    resolution_guard,
)
from .oracle import (
    SymbolCheckReport,
    damping_bound_ratio,
    damping_norm,
    elliptic_symbol_check,
    zero_mode_hardy_check,
)
from .envelope import (
    EnvelopeParams,
    envelope_blowup_time,
    envelope_norm,
    exponents,
    fit_gronwall_constant,
    predicted_lifespan,
)
from .config import ConfigError, RunConfig, load_config
from .harness import make_initial_data, run, sweep

__version__ = "0.1.0"

__all__ = [
    "GridSpec",
    "SpectralField",
    "PhysicalField",
    "forward_transform",
    "inverse_transform",
    "sobolev_norm",
    "project_modes",
    "dealias",
    "ShearFrameState",
    "VelocityPair",
    "BlowUpError",
    "solve_velocity",
    "nonlinear_term",
    "step_rk4",
    "cfl_dt",
    "linearize_flag",
    "DiagnosticsRecord",
    "DecayFit",
    "record",
    "fit_decay",
    "boundary_guard",
    "resolution_guard",
    "SymbolCheckReport",
    "damping_norm",
    "damping_bound_ratio",
    "elliptic_symbol_check",
    "zero_mode_hardy_check",
    "EnvelopeParams",
    "exponents",
    "predicted_lifespan",
    "envelope_norm",
    "envelope_blowup_time",
    "fit_gronwall_constant",
    "RunConfig",
    "ConfigError",
    "load_config",
    "make_initial_data",
    "run",
    "sweep",
    "__version__",
]
