import numpy as np
import pytest

from decorr.states import pure_state

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def phi_plus():
    return pure_state([1, 0, 0, 1])


@pytest.fixture
def singlet():
    return pure_state([0, 1, -1, 0])


@pytest.fixture
def record():
    """Log one acceptance line; the summary hook below prints them all."""

    def _record(criterion: str, ok: bool, detail: str):
        ACCEPTANCE_LINES.append(f"[{'PASS' if ok else 'FAIL'}] {criterion}: {detail}")
        return ok

    return _record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
