"""Frozen-time verification of the damping and elliptic multiplier bounds.

Nothing here integrates in time.  The shear map sends W(X, Y) to the
lab-frame field w(x, y) = W(x - t*y, y), whose Fourier coefficients are the
frequency-shifted w_hat(k, xi) = W_hat(k, xi + t*k).  Negative-order norms of
the mixed field are therefore exact lattice sums over the coefficients of W,
with the shifted symbol k^2 + (xi - t*k)^2 doing the damping:

    ||P_{!=0} w||_{Hdot^{-s}}^2 = 4*pi*ly * sum_{k != 0, j}
        (k^2 + (xi_j - t*k)^2)^{-s} |W_hat(k, j)|^2.

The elliptic check evaluates the velocity-recovery gain symbol pointwise and
reports its lattice supremum against the predicted <t>^{1+s1-s2} growth.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .spectral import GridSpec, SpectralField, inverse_transform, sobolev_norm
from .dynamics import shifted_symbol


@dataclass
class SymbolCheckReport:
    """Lattice suprema of the velocity-gain symbol across a sweep of times."""

    s1: float
    s2: float
    t_values: list[float]
    sup_ratio: list[float]
    normalized_sup: list[float]
    max_normalized: float


def damping_norm(w_hat: SpectralField, t: float, s: float) -> float:
    """||P_{!=0} w(t)||_{Hdot^{-s}} for the sheared field, with no stepping.

    Exact on the lattice: the frequency shift xi -> xi - t*k never needs
    interpolation.  s must be nonnegative (positive-order norms of W itself
    are sobolev_norm's job).
    """
    if s < 0:
        raise ValueError("damping_norm expects s >= 0")
    grid = w_hat.grid
    sym = shifted_symbol(grid, t)
    sym[0, 0] = 1.0  # k = 0 row is excluded below
    weighted = sym ** (-s) * np.abs(w_hat.coef) ** 2
    weighted[0, :] = 0.0
    return float(np.sqrt(grid.parseval_factor() * np.sum(weighted)))


def damping_bound_ratio(w_hat: SpectralField, t: float, s: float) -> float:
    """damping_norm * <t>^s normalized by ||W||_{L^2_X H^s_Y}.

    The frozen-time damping bound asserts this ratio is bounded uniformly
    in t; callers sweep t and look for growth.
    """
    denom = sobolev_norm(w_hat, s, "l2x_hsy")
    if denom == 0.0:
        raise ValueError("bound ratio undefined for the zero field")
    bracket = np.sqrt(1.0 + t * t)
    return damping_norm(w_hat, t, s) * bracket**s / denom


def _gain_symbol(k: np.ndarray, xi: np.ndarray, t: float, a: float) -> np.ndarray:
    """(k^2 + xi^2)^(a/2) / (k^2 + (xi - t*k)^2) with a = s1 + 1 - s2."""
    return (k * k + xi * xi) ** (a / 2.0) / (k * k + (xi - t * k) ** 2)


def elliptic_symbol_check(
    grid: GridSpec,
    s1: float,
    s2: float,
    t_values: list[float] | np.ndarray,
) -> SymbolCheckReport:
    """Supremum of the velocity-gain symbol over the frequency lattice.

    For each t this computes sup over k != 0 and xi of

        m = (k^2 + xi^2)^((s1+1)/2) / [(k^2 + (xi - t*k)^2) * (k^2 + xi^2)^(s2/2)]

    and its normalization by <t>^{1+s1-s2}.  The xi-lattice keeps the grid
    spacing pi/ly but is extended around each shifted resonance xi = t*k:
    the symbol lives on all of frequency space, and for t beyond the grid
    Nyquist the supremum sits outside the representable band.  The gain
    symbol is monotone between the resonance window and the origin window,
    so scanning those two windows captures the lattice supremum.
    """
    if not -1.0 <= s1 - s2 <= 1.0:
        raise ValueError(
            f"elliptic check requires -1 <= s1 - s2 <= 1, got s1-s2={s1 - s2}"
        )
    t_values = [float(t) for t in t_values]
    a = s1 + 1.0 - s2
    dxi = np.pi / grid.ly
    base_n = np.arange(-(grid.ny // 2), grid.ny // 2 + 1)
    k_all = np.arange(-(grid.nx // 2), grid.nx // 2 + 1)
    k_all = k_all[k_all != 0].astype(np.float64)

    sup_ratio = []
    normalized = []
    for t in t_values:
        best = 0.0
        for k in k_all:
            # Lattice indices of the resonance window around xi = t*k.
            center = t * k / dxi
            half_width = (8.0 * abs(k) + 16.0) / dxi
            lo = int(np.floor(center - half_width))
            hi = int(np.ceil(center + half_width))
            n_res = np.arange(lo, hi + 1)
            n = np.union1d(base_n, n_res)
            xi = n * dxi
            best = max(best, float(np.max(_gain_symbol(k, xi, t, a))))
        bracket = np.sqrt(1.0 + t * t)
        sup_ratio.append(best)
        normalized.append(best / bracket ** (1.0 + s1 - s2))

    return SymbolCheckReport(
        s1=s1,
        s2=s2,
        t_values=t_values,
        sup_ratio=sup_ratio,
        normalized_sup=normalized,
        max_normalized=float(np.max(normalized)),
    )


def zero_mode_hardy_check(w_hat: SpectralField) -> tuple[float, float]:
    """Hardy-type control of the zero-mode velocity by the Y-weighted field.

    Returns (lhs, rhs) with lhs = || |d_Y|^{-1} P_{=0} W ||_{L^2}, evaluated
    spectrally over k = 0, j != 0, and rhs = || <Y> W ||_{L^2} from the
    collocation values.  The inversion is well-defined only for fields of
    zero total mean.
    """
    if w_hat.coef[0, 0] != 0:
        raise ValueError(
            "|d_Y|^{-1} of the x-average is undefined: field has nonzero total mean"
        )
    grid = w_hat.grid
    zero_row = w_hat.coef[0, :]
    xi = grid.xi
    weights = np.zeros_like(xi)
    weights[1:] = 1.0 / xi[1:] ** 2  # j = 0 entry excluded
    lhs = float(np.sqrt(grid.parseval_factor() * np.sum(weights * np.abs(zero_row) ** 2)))

    w_phys = inverse_transform(w_hat).values
    bracket_y2 = 1.0 + grid.y_mesh**2
    rhs = float(np.sqrt(grid.dx * grid.dy * np.sum(bracket_y2 * w_phys**2)))
    return lhs, rhs
