import pytest

from ttpk.instance import DistanceMatrix

# d(1,2)=1, d(1,3)=2, d(1,4)=3, d(2,3)=1, d(2,4)=2, d(3,4)=1
FOUR = [[0, 1, 2, 3],
        [1, 0, 1, 2],
        [2, 1, 0, 1],
        [3, 2, 1, 0]]


@pytest.fixture
def four():
    return DistanceMatrix.from_values(FOUR)


ACCEPTANCE_LINES = []


@pytest.fixture
def report_line():
    """Record a one-line verdict shown in the terminal summary."""
    def record(number, ok, detail):
        line = f"criterion {number}: {'PASS' if ok else 'FAIL'} - {detail}"
        ACCEPTANCE_LINES.append((number, line))
        print(line)
    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
