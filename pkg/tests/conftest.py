import numpy as np
import pytest

from cohfrac.states import random_density

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def qubit_r03():
    """Qubit with |r| = 0.3 and a generic phase on the coherence."""
    r = 0.3 * np.exp(0.7j)
    return np.array([[0.6, r], [np.conj(r), 0.4]])


def random_states(d, n, seed=0):
    return [random_density(d, seed * 100003 + k) for k in range(n)]


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
