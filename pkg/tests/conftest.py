import numpy as np
import pytest

from wpnls import Field, make_grid


@pytest.fixture(scope="session")
def grid1024():
    return make_grid(1, 1024, 20.0)


@pytest.fixture(scope="session")
def grid2048():
    return make_grid(1, 2048, 20.0)


@pytest.fixture
def gaussian(grid1024):
    x = grid1024.axis_points()
    return Field(grid=grid1024, samples=np.exp(-(x**2) / 2.0))


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
