import cmath
import math

import numpy as np
import pytest


def direct_theta(a, b, z, tau, terms=60):
    """Plain-Python truncated theta sum, independent of the library's window logic."""
    total = 0j
    for m in range(-terms, terms + 1):
        u = m + a
        total += cmath.exp(1j * math.pi * (u * u * tau + 2 * u * (z + b)))
    return total


def max_abs(a):
    return float(np.max(np.abs(a)))


@pytest.fixture
def rng():
    return np.random.default_rng(20261015)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
