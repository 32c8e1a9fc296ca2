import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(20240517)


def ar1(rng, phi, T, burn=200):
    e = rng.standard_normal(T + burn)
    y = np.empty_like(e)
    y[0] = e[0]
    for t in range(1, e.size):
        y[t] = phi * y[t - 1] + e[t]
    return y[burn:]


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
