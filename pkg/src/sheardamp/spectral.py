"""Spectral core: grids, transforms, Fourier multipliers, and norms.

The domain is the periodic box (X, Y) in [0, 2*pi) x [-L_y, L_y).  Fields are
expanded as

    f(X, Y) = sum_{k,j} coef(k, j) * exp(i*(k*X + xi_j*Y)),   xi_j = pi*j/L_y,

with integer X-wavenumbers |k| <= nx/2 and Y-mode indices |j| <= ny/2.  Under
this normalization Parseval reads

    ||f||_{L^2}^2 = 4*pi*L_y * sum |coef|^2,

so every norm in this package is a domain-integral norm, not a per-sample
average.  Coefficient arrays have shape (nx, ny) in standard FFT ordering
(axis 0 = k, axis 1 = j).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

DEALIAS_FRACTION_DEFAULT = 2.0 / 3.0

# Contract tolerances for transform sanity checks.
HERMITIAN_RTOL = 1e-10


@dataclass
class GridSpec:
    """Discretized domain [0, 2*pi) x [-ly, ly) and its frequency lattice.

    nx, ny are the number of collocation points (and modes) in X and Y;
    both must be even and at least 8.  Derived arrays are cached; treat
    instances as immutable after construction.
    """

    nx: int
    ny: int
    ly: float
    dealias_fraction: float = DEALIAS_FRACTION_DEFAULT

    def __post_init__(self):
        if self.nx < 8 or self.ny < 8:
            raise ValueError(f"grid must be at least 8x8, got {self.nx}x{self.ny}")
        if self.nx % 2 != 0 or self.ny % 2 != 0:
            raise ValueError(f"grid dimensions must be even, got {self.nx}x{self.ny}")
        if self.ly <= 0:
            raise ValueError(f"ly must be positive, got {self.ly}")
        if not 0.0 < self.dealias_fraction <= 1.0:
            raise ValueError(
                f"dealias_fraction must be in (0, 1], got {self.dealias_fraction}"
            )

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nx, self.ny)

    @property
    def dx(self) -> float:
        return 2.0 * np.pi / self.nx

    @property
    def dy(self) -> float:
        return 2.0 * self.ly / self.ny

    @cached_property
    def k(self) -> np.ndarray:
        """Integer X-wavenumbers in FFT order, shape (nx,)."""
        return np.fft.fftfreq(self.nx, d=1.0 / self.nx).astype(np.int64)

    @cached_property
    def j(self) -> np.ndarray:
        """Integer Y-mode indices in FFT order, shape (ny,)."""
        return np.fft.fftfreq(self.ny, d=1.0 / self.ny).astype(np.int64)

    @cached_property
    def xi(self) -> np.ndarray:
        """Real Y-frequencies xi_j = pi*j/ly in FFT order, shape (ny,)."""
        return np.pi * self.j / self.ly

    @cached_property
    def k_mesh(self) -> np.ndarray:
        return self.k[:, None].astype(np.float64) * np.ones((1, self.ny))

    @cached_property
    def xi_mesh(self) -> np.ndarray:
        return np.ones((self.nx, 1)) * self.xi[None, :]

    @cached_property
    def x(self) -> np.ndarray:
        """Collocation points X_m = 2*pi*m/nx, shape (nx,)."""
        return 2.0 * np.pi * np.arange(self.nx) / self.nx

    @cached_property
    def y(self) -> np.ndarray:
        """Collocation points Y_n = -ly + 2*ly*n/ny, shape (ny,)."""
        return -self.ly + 2.0 * self.ly * np.arange(self.ny) / self.ny

    @cached_property
    def x_mesh(self) -> np.ndarray:
        return self.x[:, None] * np.ones((1, self.ny))

    @cached_property
    def y_mesh(self) -> np.ndarray:
        return np.ones((self.nx, 1)) * self.y[None, :]

    @cached_property
    def _y_phase(self) -> np.ndarray:
        # The Y-grid starts at -ly, not 0; exp(i*xi_j*(-ly)) = (-1)^j links the
        # modal expansion to the plain DFT on [0, 2*ly).
        return np.where(np.abs(self.j) % 2 == 0, 1.0, -1.0)[None, :]

    @cached_property
    def dealias_mask(self) -> np.ndarray:
        """Boolean (nx, ny) mask of modes kept by the 2/3-type rule."""
        kcut = self.dealias_fraction * self.nx / 2.0
        jcut = self.dealias_fraction * self.ny / 2.0
        keep_k = np.abs(self.k)[:, None] <= kcut
        keep_j = np.abs(self.j)[None, :] <= jcut
        return keep_k & keep_j

    def parseval_factor(self) -> float:
        """Domain measure 4*pi*ly relating |coef|^2 sums to L^2 integrals."""
        return 4.0 * np.pi * self.ly


@dataclass
class SpectralField:
    """Complex Fourier coefficients of a scalar field on a GridSpec lattice."""

    grid: GridSpec
    coef: np.ndarray

    def __post_init__(self):
        self.coef = np.asarray(self.coef, dtype=np.complex128)
        if self.coef.shape != self.grid.shape:
            raise ValueError(
                f"coefficient shape {self.coef.shape} does not match grid {self.grid.shape}"
            )

    @classmethod
    def zeros(cls, grid: GridSpec) -> "SpectralField":
        return cls(grid, np.zeros(grid.shape, dtype=np.complex128))

    def copy(self) -> "SpectralField":
        return SpectralField(self.grid, self.coef.copy())

    def mode_index(self, k: int, j: int) -> tuple[int, int]:
        if abs(k) > self.grid.nx // 2 or abs(j) > self.grid.ny // 2:
            raise ValueError(f"mode ({k}, {j}) outside the frequency lattice")
        return (k % self.grid.nx, j % self.grid.ny)

    def get_mode(self, k: int, j: int) -> complex:
        return self.coef[self.mode_index(k, j)]

    def set_mode(self, k: int, j: int, value: complex) -> None:
        self.coef[self.mode_index(k, j)] = value

    def hermitian_violation(self) -> float:
        """Max |coef(-k,-j) - conj(coef(k,j))| relative to max |coef|."""
        flipped = np.conj(_reflect(self.coef))
        scale = np.max(np.abs(self.coef))
        if scale == 0.0:
            return 0.0
        return float(np.max(np.abs(self.coef - flipped)) / scale)


@dataclass
class PhysicalField:
    """Real collocation values on the nx x ny lattice."""

    grid: GridSpec
    values: np.ndarray

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=np.float64)
        if self.values.shape != self.grid.shape:
            raise ValueError(
                f"value shape {self.values.shape} does not match grid {self.grid.shape}"
            )

    @classmethod
    def zeros(cls, grid: GridSpec) -> "PhysicalField":
        return cls(grid, np.zeros(grid.shape))


def _reflect(coef: np.ndarray) -> np.ndarray:
    """coef(k, j) -> coef(-k, -j) on the FFT-ordered lattice."""
    out = coef[::-1, :][:, ::-1]
    return np.roll(out, (1, 1), axis=(0, 1))


def forward_transform(f: PhysicalField) -> SpectralField:
    """Collocation values -> modal coefficients.

    Rejects non-finite input; exact inverse of `inverse_transform`.
    """
    if not np.all(np.isfinite(f.values)):
        raise ValueError("physical field contains non-finite values")
    grid = f.grid
    coef = np.fft.fft2(f.values) / (grid.nx * grid.ny) * grid._y_phase
    return SpectralField(grid, coef)


def inverse_transform(F: SpectralField) -> PhysicalField:
    """Modal coefficients -> real collocation values.

    The coefficients must be Hermitian-symmetric (real-valued field); a
    violation beyond 1e-10 relative signals upstream corruption and raises.
    The sub-roundoff imaginary residue of the inverse FFT is discarded.
    """
    violation = F.hermitian_violation()
    if violation > HERMITIAN_RTOL:
        raise ValueError(
            f"Hermitian symmetry violated (relative deviation {violation:.3e}); "
            "field does not represent real-valued data"
        )
    grid = F.grid
    values = np.fft.ifft2(F.coef * grid._y_phase) * (grid.nx * grid.ny)
    return PhysicalField(grid, values.real)


def sobolev_norm(F: SpectralField, s: float, kind: str = "inhomogeneous") -> float:
    """Sobolev norm of a spectral field.

    kind:
      - "inhomogeneous": weight (1 + k^2 + xi^2)^s   (J^s multiplier, squared)
      - "homogeneous":   weight (k^2 + xi^2)^s, (0,0) term omitted
      - "l2x_hsy":       weight (1 + xi^2)^s         (L^2 in X, H^s in Y)

    All three include the 4*pi*ly domain factor so that s = 0 reproduces the
    physical-space L^2 integral norm.
    """
    grid = F.grid
    a2 = np.abs(F.coef) ** 2
    if kind == "inhomogeneous":
        weight = (1.0 + grid.k_mesh**2 + grid.xi_mesh**2) ** s
        total = np.sum(weight * a2)
    elif kind == "homogeneous":
        if s < 0 and F.coef[0, 0] != 0:
            raise ValueError(
                "homogeneous norm with s < 0 is undefined for a field with a "
                "nonzero (0, 0) mode"
            )
        r2 = grid.k_mesh**2 + grid.xi_mesh**2
        r2[0, 0] = 1.0  # excluded below; avoid 0**negative warnings
        weight = r2**s
        weighted = weight * a2
        weighted[0, 0] = 0.0
        total = np.sum(weighted)
    elif kind == "l2x_hsy":
        weight = (1.0 + grid.xi_mesh**2) ** s
        total = np.sum(weight * a2)
    else:
        raise ValueError(f"unknown norm kind {kind!r}")
    return float(np.sqrt(grid.parseval_factor() * total))


def l2_norm(F: SpectralField) -> float:
    return sobolev_norm(F, 0.0, "inhomogeneous")


def project_modes(F: SpectralField, which: str) -> SpectralField:
    """Split off the X-mean: "nonzero_x" removes k = 0, "zero_x" keeps only it.

    The two projections are complementary: their outputs sum to F exactly.
    """
    out = F.coef.copy()
    if which == "nonzero_x":
        out[0, :] = 0.0
    elif which == "zero_x":
        keep = out[0, :].copy()
        out[:] = 0.0
        out[0, :] = keep
    else:
        raise ValueError(f"unknown projection {which!r}")
    return SpectralField(F.grid, out)


def dealias(F: SpectralField) -> SpectralField:
    """Zero modes beyond the dealias fraction of the Nyquist in either axis."""
    return SpectralField(F.grid, F.coef * F.grid.dealias_mask)


def quadrature_l2(f: PhysicalField) -> float:
    """Physical-space L^2 norm by the (periodic, uniform) quadrature rule."""
    grid = f.grid
    return float(np.sqrt(grid.dx * grid.dy * np.sum(f.values**2)))
