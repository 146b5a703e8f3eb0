import numpy as np
import pytest

from sheardamp.spectral import GridSpec, PhysicalField, SpectralField, forward_transform


@pytest.fixture
def grid():
    return GridSpec(32, 64, 4 * np.pi)


@pytest.fixture
def small_grid():
    return GridSpec(16, 16, 2 * np.pi)


def random_real_field(grid: GridSpec, seed: int = 0, scale: float = 1.0) -> SpectralField:
    """Hermitian-symmetric coefficients of a random real-valued field."""
    rng = np.random.default_rng(seed)
    values = scale * rng.normal(size=grid.shape)
    return forward_transform(PhysicalField(grid, values))


def gaussian_single_mode(grid: GridSpec, width: float = 1.0) -> SpectralField:
    """sin(X) * exp(-(Y/width)^2): one X-mode under a Gaussian Y-profile."""
    values = np.sin(grid.x_mesh) * np.exp(-((grid.y_mesh / width) ** 2))
    w = forward_transform(PhysicalField(grid, values))
    w.coef[0, 0] = 0.0
    return w
