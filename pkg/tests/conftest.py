import numpy as np
import pytest

from logimath.residual import Grid


@pytest.fixture
def unit_grid():
    return Grid.uniform(0.5, 5.0, 64)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
