from __future__ import annotations

from fractions import Fraction

import pytest

from rpmbounds import PotentialParams, StateLabel, bound_state


@pytest.fixture(scope="session")
def benchmark_params():
    return PotentialParams(1, 1, 1)


@pytest.fixture(scope="session")
def ground_report(benchmark_params):
    """(n=0, l=1) at b = c = 1, D up to 20."""
    return bound_state(benchmark_params, StateLabel(0, 1), dmax=20)


@pytest.fixture(scope="session")
def excited_report(benchmark_params):
    """(n=1, l=1) at b = c = 1, D up to 20."""
    return bound_state(benchmark_params, StateLabel(1, 1), dmax=20)


@pytest.fixture(scope="session")
def exact_params():
    return PotentialParams(Fraction(-23, 50), Fraction(1, 10), 0)


def pytest_terminal_summary(terminalreporter):
    import sys

    for module in list(sys.modules.values()):
        lines = getattr(module, "ACCEPTANCE_LINES", None)
        if lines:
            terminalreporter.section("acceptance criteria")
            for line in lines:
                terminalreporter.write_line(line)
            break
