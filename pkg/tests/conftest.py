import numpy as np
import pytest

from fmps.funcgrid import Domain, FunctionSpec, discretize


@pytest.fixture
def gaussian():
    return FunctionSpec("gaussian", {"mu": 0.0, "sigma": 1.0})


@pytest.fixture
def gauss_domain():
    return Domain(-4.0, 4.0)


@pytest.fixture
def ramp():
    return FunctionSpec("linear-ramp")


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def gaussian_state(n):
    return discretize(FunctionSpec("gaussian"), Domain(-4.0, 4.0), n)


# one line per acceptance criterion, filled in by tests/test_acceptance.py
ACCEPTANCE_LINES: dict[int, str] = {}


def record_criterion(number: int, ok: bool, detail: str) -> None:
    line = f"criterion {number}: {'PASS' if ok else 'FAIL'}  {detail}"
    ACCEPTANCE_LINES[number] = line
    print(line)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[number])
