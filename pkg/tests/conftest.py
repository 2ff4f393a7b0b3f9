import numpy as np
import pytest

from rrtplus.cspace import ConfigSpace, PlanProblem


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def box_problem(q_init, q_goal, blocked=None, lo=0.0, hi=1.0):
    """2-D unit-box problem; ``blocked(q)`` marks colliding states."""
    space = ConfigSpace.uniform(len(q_init), lo, hi)
    valid = (lambda q: True) if blocked is None else (lambda q: not blocked(q))
    return PlanProblem(space, np.asarray(q_init, float), np.asarray(q_goal, float), valid)


class ForcedRng:
    """Stand-in generator returning fixed values from ``random``."""

    def __init__(self, value):
        self.value = value

    def random(self, size=None):
        if size is None:
            return self.value
        return np.full(size, self.value)


# -- acceptance report ------------------------------------------------------

ACCEPTANCE_LINES: dict[int, str] = {}


@pytest.fixture
def criterion():
    """Record one pass/fail line per acceptance criterion; printed at the end of the run."""

    def record(number: int, title: str, passed: bool, detail: str = "") -> bool:
        status = "PASS" if passed else "FAIL"
        ACCEPTANCE_LINES[number] = f"criterion {number:2d} [{status}] {title}: {detail}".rstrip(": ")
        print(ACCEPTANCE_LINES[number])
        return passed

    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[k])
