import numpy as np
import pytest

from relqc.spacetime import Geometry


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def geom():
    return Geometry.default(1.0)


# One line per acceptance criterion, shown in the terminal summary whether or
# not output capture is on.
ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def criterion():
    def record(number: int, ok: bool, detail: str) -> None:
        line = f"criterion {number}: {'PASS' if ok else 'FAIL'} - {detail}"
        ACCEPTANCE_LINES.append(line)
        print(line)
        assert ok, line
    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
