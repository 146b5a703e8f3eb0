"""Trajectory diagnostics: tracked norms, decay-exponent fits, and guards.

The lab-frame velocities are recovered without leaving the moving frame:
the shear map is measure-preserving and x-averages equal X-averages, so

    ||P_{!=0} u^x||_{L^2(x,y)} = ||P_{!=0} (U^X + t U^Y)||_{L^2(X,Y)},
    ||u^y||_{L^2(x,y)}         = ||U^Y||_{L^2(X,Y)}.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, asdict

import numpy as np

from .dynamics import ShearFrameState, solve_velocity
from .spectral import (
    SpectralField,
    inverse_transform,
    l2_norm,
    project_modes,
    sobolev_norm,
)

BOUNDARY_THRESHOLD_DEFAULT = 1e-6

# Abort thresholds for leaving the certified regime (see resolution_guard).
BLOWUP_NORM_FACTOR = 10.0
TAIL_MASS_LIMIT = 0.01


@dataclass
class DiagnosticsRecord:
    """One time-sample of all tracked norms and solver health data."""

    t: float
    l2: float
    hs: float
    yw_l2: float
    bar_hs: float
    ux_neq0_l2: float
    uy_l2: float
    dt_used: float
    boundary_frac: float
    step_count: int

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass
class DecayFit:
    """Log-log least-squares fit of a decaying time series."""

    exponent: float
    exponent_stderr: float
    log_prefactor: float
    window: tuple[float, float]
    n_samples: int

    def to_dict(self) -> dict:
        return {
            "exponent": self.exponent,
            "exponent_stderr": self.exponent_stderr,
            "log_prefactor": self.log_prefactor,
            "window": list(self.window),
            "n_samples": self.n_samples,
        }


def record(state: ShearFrameState, s: float, dt_used: float = 0.0) -> DiagnosticsRecord:
    """Measure every tracked quantity on a state snapshot.

    The Y-moment is computed in physical space (collocation values times Y),
    and boundary_frac is the fraction of the enstrophy in the outer 10% of
    the Y-domain, policing the periodic truncation of the unbounded strip.
    """
    grid = state.grid
    w_hat = state.w_hat
    l2 = l2_norm(w_hat)
    hs = sobolev_norm(w_hat, s, "inhomogeneous")

    w_phys = inverse_transform(w_hat).values
    yw = float(np.sqrt(grid.dx * grid.dy * np.sum((grid.y_mesh * w_phys) ** 2)))

    w2_total = float(np.sum(w_phys**2))
    if w2_total > 0:
        outer = np.abs(grid.y) >= 0.9 * grid.ly
        boundary_frac = float(np.sum(w_phys[:, outer] ** 2) / w2_total)
    else:
        boundary_frac = 0.0

    vel = solve_velocity(w_hat, state.t)
    ux_lab = SpectralField(grid, vel.ux_hat.coef + state.t * vel.uy_hat.coef)
    ux_neq0 = l2_norm(project_modes(ux_lab, "nonzero_x"))
    uy = l2_norm(vel.uy_hat)

    return DiagnosticsRecord(
        t=state.t,
        l2=l2,
        hs=hs,
        yw_l2=yw,
        bar_hs=hs + yw,
        ux_neq0_l2=ux_neq0,
        uy_l2=uy,
        dt_used=dt_used,
        boundary_frac=boundary_frac,
        step_count=state.step_count,
    )


def fit_decay(
    series: list[tuple[float, float]], window: tuple[float, float]
) -> DecayFit:
    """Least-squares line on (log t, log v) over the window.

    Requires at least 8 samples with positive t and v inside the window.
    The slope standard error comes from the fit residuals.
    """
    t_min, t_max = window
    if not t_min < t_max:
        raise ValueError(f"window must satisfy t_min < t_max, got {window}")
    pts = [(t, v) for t, v in series if t_min <= t <= t_max]
    if len(pts) < 8:
        raise ValueError(f"need at least 8 samples in window, got {len(pts)}")
    t = np.array([p[0] for p in pts])
    v = np.array([p[1] for p in pts])
    if np.any(t <= 0):
        raise ValueError("fit window must lie in t > 0")
    if np.any(v <= 0):
        raise ValueError("decay fit requires positive values")

    x = np.log(t)
    y = np.log(v)
    n = len(x)
    xbar = x.mean()
    sxx = float(np.sum((x - xbar) ** 2))
    slope = float(np.sum((x - xbar) * (y - y.mean())) / sxx)
    intercept = float(y.mean() - slope * xbar)
    resid = y - (intercept + slope * x)
    stderr = float(np.sqrt(np.sum(resid**2) / (n - 2) / sxx)) if n > 2 else 0.0
    return DecayFit(
        exponent=slope,
        exponent_stderr=stderr,
        log_prefactor=intercept,
        window=(t_min, t_max),
        n_samples=n,
    )


def boundary_guard(
    rec: DiagnosticsRecord, threshold: float = BOUNDARY_THRESHOLD_DEFAULT
) -> str:
    """"violated" iff the boundary enstrophy fraction exceeds the threshold."""
    return "violated" if rec.boundary_frac > threshold else "ok"


def resolution_guard(state: ShearFrameState, s: float, epsilon: float) -> str:
    """Detect leaving the certified regime or spectral underresolution.

    Violated when ||W||_{H^s} exceeds 10*epsilon (the theory predicts <= 3*
    epsilon on the certified horizon) or when the upper third of the retained
    frequency shell carries more than 1% of the H^s mass.  Modes beyond the
    dealias cutoff are identically zero, so the shell is measured relative to
    the retained band.
    """
    grid = state.grid
    hs = sobolev_norm(state.w_hat, s, "inhomogeneous")
    if epsilon > 0 and hs > BLOWUP_NORM_FACTOR * epsilon:
        return "violated"
    weight = (1.0 + grid.k_mesh**2 + grid.xi_mesh**2) ** s
    mass = weight * np.abs(state.w_hat.coef) ** 2
    total = float(np.sum(mass))
    if total == 0.0:
        return "ok"
    kcut = grid.dealias_fraction * grid.nx / 2.0
    jcut = grid.dealias_fraction * grid.ny / 2.0
    tail = (np.abs(grid.k_mesh) > (2.0 / 3.0) * kcut) | (
        np.abs(grid.xi_mesh) * grid.ly / np.pi > (2.0 / 3.0) * jcut
    )
    tail_frac = float(np.sum(mass[tail]) / total)
    return "violated" if tail_frac > TAIL_MASS_LIMIT else "ok"
