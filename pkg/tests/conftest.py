import numpy as np
import pytest

from starconv.checks import GridSpec
from starconv.series import PowerSeries


def random_normalized(rng, order=64, bound=1.0):
    """``z + sum a_k z^k`` with ``|a_k| <= bound``."""
    mag = rng.uniform(0, bound, order + 1)
    phase = rng.uniform(0, 2 * np.pi, order + 1)
    c = mag * np.exp(1j * phase)
    c[0], c[1] = 0, 1
    return PowerSeries(c)


def random_unit_constant(rng, order=64, bound=1.0):
    c = rng.uniform(-bound, bound, order + 1) + 1j * rng.uniform(-bound, bound, order + 1)
    c[0] = 1
    return PowerSeries(c)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture(scope="session")
def default_grid():
    return GridSpec()


@pytest.fixture(scope="session")
def grid_order(default_grid):
    return default_grid.adequate_order()


_CRITERIA = []


@pytest.fixture
def criterion():
    """Record one acceptance line: ``criterion(number, ok, detail)``, then assert ``ok``."""

    def record(number, ok, detail):
        line = f"criterion {number:>2}: {'PASS' if ok else 'FAIL'}  {detail}"
        _CRITERIA.append((number, line))
        print(line)
        assert ok, line

    return record


def pytest_terminal_summary(terminalreporter):
    if _CRITERIA:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(_CRITERIA):
            terminalreporter.write_line(line)
