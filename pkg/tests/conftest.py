import numpy as np
import pytest

from chordal.grid import make_grid
from chordal.robustness import example_controller, example_nominal, example_plant
from chordal.series import Series

ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def w():
    return Series.monomial((1, 1))


@pytest.fixture(scope="session")
def coarse_grid():
    return make_grid(2, 9, 32)


@pytest.fixture(scope="session")
def default_grid():
    return make_grid(2, 21, 126)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def p0():
    return example_nominal()


@pytest.fixture
def controller():
    return example_controller()


@pytest.fixture
def p_alpha():
    return example_plant


def random_polydisc_points(rng, m, nvars):
    """Uniform-in-area samples of the closed polydisc (plus some torus points)."""
    r = np.sqrt(rng.uniform(0, 1, (m, nvars)))
    r[: m // 10] = 1.0
    theta = rng.uniform(0, 2 * np.pi, (m, nvars))
    return r * np.exp(1j * theta)
