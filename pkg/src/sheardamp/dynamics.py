"""Shear-frame dynamics: velocity recovery, transport term, and RK4 stepping.

In the moving frame (X, Y) = (x - t*y, y) the Couette transport disappears
and the vorticity perturbation W obeys

    dW/dt + U . grad W = 0,      U = (-d_Y Psi, d_X Psi),

where the stream function solves the time-dependent elliptic problem
[(d_Y - t d_X)^2 + d_X^2] Psi = W.  On the frequency lattice the operator is
the scalar symbol -(k^2 + (xi - t*k)^2), so the velocity solve is a pure
multiplier and the resolution needed to represent W does not grow with t.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .spectral import GridSpec, SpectralField, inverse_transform

CFL_SAFETY_DEFAULT = 0.4
DT_MAX_DEFAULT = 0.1

# Classical RK4 tableau: stage offsets and quadrature weights.
_RK4_STAGE_C = (0.0, 0.5, 0.5, 1.0)
_RK4_WEIGHTS = (1.0 / 6.0, 1.0 / 3.0, 1.0 / 3.0, 1.0 / 6.0)


class BlowUpError(RuntimeError):
    """Raised when stepping produces non-finite data (blow-up/underresolution).

    Carries the last valid state so a driver can checkpoint or report it.
    """

    def __init__(self, message: str, last_state: "ShearFrameState"):
        super().__init__(message)
        self.last_state = last_state


@dataclass
class ShearFrameState:
    """Time t plus the spectral vorticity in the moving frame."""

    t: float
    w_hat: SpectralField
    step_count: int = 0
    linear: bool = False

    def __post_init__(self):
        if self.w_hat.coef[0, 0] != 0:
            raise ValueError("shear-frame vorticity must have zero total mean")

    @property
    def grid(self) -> GridSpec:
        return self.w_hat.grid

    def copy(self) -> "ShearFrameState":
        return ShearFrameState(self.t, self.w_hat.copy(), self.step_count, self.linear)


@dataclass
class VelocityPair:
    """Spectral components of the renormalized velocity U = (U^X, U^Y)."""

    ux_hat: SpectralField
    uy_hat: SpectralField

    def divergence_violation(self) -> float:
        """Max mode-wise |ik*ux + i*xi*uy| relative to max mode-wise |U|."""
        grid = self.ux_hat.grid
        div = 1j * grid.k_mesh * self.ux_hat.coef + 1j * grid.xi_mesh * self.uy_hat.coef
        scale = max(np.max(np.abs(self.ux_hat.coef)), np.max(np.abs(self.uy_hat.coef)))
        if scale == 0.0:
            return 0.0
        return float(np.max(np.abs(div)) / scale)


def shifted_symbol(grid: GridSpec, t: float) -> np.ndarray:
    """k^2 + (xi - t*k)^2 on the lattice; zero only at the (0, 0) mode."""
    return grid.k_mesh**2 + (grid.xi_mesh - t * grid.k_mesh) ** 2


def solve_velocity(w_hat: SpectralField, t: float) -> VelocityPair:
    """Invert the sheared Laplacian and take the perpendicular gradient.

    Psi_hat = -W_hat / (k^2 + (xi - t*k)^2), U^X = -i*xi*Psi, U^Y = i*k*Psi.
    For k = 0 the symbol reduces to xi^2 (the |d_Y|^{-1}-type zero-mode
    inversion), which is why the total mean of W must vanish.

    The self-conjugate Nyquist shells are dropped from Psi: neither the
    sheared symbol nor a first derivative acts symmetrically on them, so
    keeping them would make the velocity of a real field non-real.  They
    sit beyond the dealias cutoff in any case.
    """
    if w_hat.coef[0, 0] != 0:
        raise ValueError("velocity solve requires a mean-free vorticity field")
    grid = w_hat.grid
    denom = shifted_symbol(grid, t)
    denom[0, 0] = 1.0  # (0,0) numerator is zero; avoid 0/0
    psi = -w_hat.coef / denom
    psi[grid.nx // 2, :] = 0.0
    psi[:, grid.ny // 2] = 0.0
    ux = -1j * grid.xi_mesh * psi
    uy = 1j * grid.k_mesh * psi
    return VelocityPair(SpectralField(grid, ux), SpectralField(grid, uy))


def nonlinear_term(w_hat: SpectralField, t: float) -> SpectralField:
    """Spectral coefficients of -(U . grad W), dealiased pseudo-spectrally.

    Velocities and gradients are dealiased, multiplied on the collocation
    grid, transformed back, and dealiased again, so the quadratic product is
    alias-free.  Divergence-free transport preserves the mean: the output
    (0, 0) mode is zeroed exactly.

    This is the stepper's hot path: the four inverse transforms are batched
    into one FFT call, and the corruption guard (Hermitian symmetry) runs
    once on the input, which the derivative and velocity multipliers then
    preserve exactly on the dealiased lattice.
    """
    from .spectral import HERMITIAN_RTOL

    grid = w_hat.grid
    if w_hat.coef[0, 0] != 0:
        raise ValueError("transport term requires a mean-free vorticity field")
    violation = w_hat.hermitian_violation()
    if violation > HERMITIAN_RTOL:
        raise ValueError(
            f"Hermitian symmetry violated (relative deviation {violation:.3e}); "
            "field does not represent real-valued data"
        )

    wd = w_hat.coef * grid.dealias_mask
    denom = shifted_symbol(grid, t)
    denom[0, 0] = 1.0
    psi = -wd / denom

    spectra = np.empty((4,) + grid.shape, dtype=np.complex128)
    spectra[0] = -1j * grid.xi_mesh * psi  # U^X
    spectra[1] = 1j * grid.k_mesh * psi  # U^Y
    spectra[2] = 1j * grid.k_mesh * wd  # d_X W
    spectra[3] = 1j * grid.xi_mesh * wd  # d_Y W
    spectra *= grid._y_phase
    phys = np.fft.ifft2(spectra, axes=(-2, -1)).real
    phys *= grid.nx * grid.ny

    advection = phys[0] * phys[2] + phys[1] * phys[3]
    out = np.fft.fft2(advection) / (grid.nx * grid.ny) * grid._y_phase
    out *= grid.dealias_mask
    out *= -1.0
    out[0, 0] = 0.0
    return SpectralField(grid, out)


def step_rk4(state: ShearFrameState, dt: float) -> ShearFrameState:
    """Advance one classical RK4 step of size dt.

    Each stage evaluates the transport term at the stage time t + c*dt, so
    the time-dependent symbol of the elliptic solve is staged consistently
    and the scheme retains fourth order for the nonautonomous system.  In
    linear mode the transport term is skipped and W is exactly constant.
    """
    if dt <= 0:
        raise ValueError(f"dt must be positive, got {dt}")
    if state.linear:
        return ShearFrameState(
            state.t + dt, state.w_hat.copy(), state.step_count + 1, True
        )

    grid = state.grid
    w0 = state.w_hat.coef
    increment = np.zeros_like(w0)
    stage = w0
    k_prev = None
    for c, b in zip(_RK4_STAGE_C, _RK4_WEIGHTS):
        if k_prev is not None:
            stage = w0 + (c * dt) * k_prev
        k_prev = nonlinear_term(SpectralField(grid, stage), state.t + c * dt).coef
        increment += b * k_prev

    w_new = w0 + dt * increment
    if not np.all(np.isfinite(w_new)):
        raise BlowUpError(
            f"non-finite vorticity after step at t={state.t:.6g} "
            "(blow-up or underresolution)",
            state,
        )
    w_new[0, 0] = 0.0
    return ShearFrameState(
        state.t + dt, SpectralField(grid, w_new), state.step_count + 1, False
    )


def cfl_dt(
    state: ShearFrameState,
    c_cfl: float = CFL_SAFETY_DEFAULT,
    dt_max: float = DT_MAX_DEFAULT,
) -> float:
    """Advective CFL bound c_cfl * min(dX/max|U^X|, dY/max|U^Y|), capped.

    Velocity maxima are taken over collocation values.  A zero velocity
    field returns dt_max.
    """
    grid = state.grid
    vel = solve_velocity(state.w_hat, state.t)
    ux_max = float(np.max(np.abs(inverse_transform(vel.ux_hat).values)))
    uy_max = float(np.max(np.abs(inverse_transform(vel.uy_hat).values)))
    dt = dt_max
    if ux_max > 0:
        dt = min(dt, c_cfl * grid.dx / ux_max)
    if uy_max > 0:
        dt = min(dt, c_cfl * grid.dy / uy_max)
    return dt


def linearize_flag(state: ShearFrameState, on: bool) -> ShearFrameState:
    """Toggle linearized dynamics (dW/dt = 0 in the moving frame)."""
    state.linear = bool(on)
    return state
