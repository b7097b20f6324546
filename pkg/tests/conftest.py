import numpy as np
import pytest

from skdv import ModelParams, make_grid
from skdv.model import FieldState


@pytest.fixture
def grid():
    return make_grid(512, 100.0, 0.0)


@pytest.fixture
def params():
    return ModelParams(alpha=-1.0, beta=1.0, gamma=-1.0)


@pytest.fixture
def localized_state(grid):
    """Smooth localized data decaying below roundoff at the box boundary."""
    x = grid.nodes
    u = 0.5 * np.exp(-((x / 2.0) ** 2)) * np.exp(0.3j * x)
    v = 0.4 / np.cosh(x / 2.0) ** 2
    return FieldState(grid, u.astype(complex), v, t=0.0)
