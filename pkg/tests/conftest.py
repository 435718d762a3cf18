import numpy as np
import pytest

from sinegordon import make_grid


@pytest.fixture
def rng():
    return np.random.default_rng(20240617)


def random_homogeneous(grid, rng):
    """Random field that vanishes on a Dirichlet boundary (any field on a periodic grid)."""
    u = rng.standard_normal(grid.shape)
    if not grid.periodic:
        u[0, :] = u[-1, :] = u[:, 0] = u[:, -1] = 0.0
    return u


@pytest.fixture(params=["homogeneous", "periodic"])
def small_grid(request):
    return make_grid(0.0, 1.0, 0.0, 1.0, 12, request.param)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
