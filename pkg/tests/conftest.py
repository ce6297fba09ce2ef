import numpy as np
import pytest

from cdsim import SystemParams

ACCEPTANCE_LINES = []


@pytest.fixture
def report():
    """Collects one summary line per acceptance criterion."""
    return ACCEPTANCE_LINES.append


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def random_params(rng, n0_range=(2, 30)):
    return SystemParams(
        omega=rng.uniform(0, 10),
        g=rng.uniform(0, 10),
        gamma=rng.uniform(0, 5),
        n0=int(rng.integers(n0_range[0], n0_range[1] + 1)),
    )


@pytest.fixture
def rng():
    return np.random.default_rng(20240917)
