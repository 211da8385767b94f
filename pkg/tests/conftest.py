import pytest

from opchernoff import exponential, gamma, lognormal, normal, uniform


@pytest.fixture
def std_normal():
    return normal(0, 1)


@pytest.fixture
def exp1():
    return exponential(1)


@pytest.fixture
def catalog():
    return [normal(0, 1), exponential(1), gamma(2, 1), uniform(0, 1), lognormal(0, 1)]


ACCEPTANCE_LINES = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[key])
