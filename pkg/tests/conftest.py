import numpy as np
import pytest

from gradrubin.boundary import BoundaryData
from gradrubin.grid import PeriodicGrid


@pytest.fixture(scope="session")
def grid():
    return PeriodicGrid(64, 129, 1.0)


@pytest.fixture(scope="session")
def small_grid():
    return PeriodicGrid(16, 33, 1.0)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def single_mode_data(grid, eps):
    x = grid.x
    return BoundaryData(eps * np.cos(x), eps * np.cos(x), eps * np.sin(x))


def manufactured_data(grid, amp=0.05):
    f = amp * np.cos(grid.x)
    return BoundaryData(f, f, np.zeros(grid.Nx))


def smooth_random_trace(rng, N, nmodes=4, amp=1.0, mean=True):
    x = 2 * np.pi * np.arange(N) / N
    out = np.full(N, rng.normal() if mean else 0.0) * amp
    for n in range(1, nmodes + 1):
        a, b = rng.normal(size=2) * amp / n**2
        out += a * np.cos(n * x) + b * np.sin(n * x)
    return out
