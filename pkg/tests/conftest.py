import math

import pytest

from awbgk.quadrature import build_grid, default_grid

_ACCEPTANCE_LINES = []


def li_oracle(s, c, n_terms=2000):
    """Li_s(e^-c) by plain summation, independent of the package code."""
    return math.fsum(math.exp(-c * k) / k**s for k in range(1, n_terms + 1))


@pytest.fixture(scope="session")
def grid():
    return default_grid()


@pytest.fixture(scope="session")
def uniform_grid():
    return build_grid("uniform", 400, 40.0)


@pytest.fixture(scope="session")
def acceptance_log():
    return _ACCEPTANCE_LINES


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
