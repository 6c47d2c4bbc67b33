import pytest

from symmlab import make_grid
from symmlab.harness import default_corpus


@pytest.fixture(scope="session")
def g256():
    return make_grid(2.0, 256)


@pytest.fixture(scope="session")
def g512():
    return make_grid(2.0, 512)


@pytest.fixture(scope="session")
def g64():
    return make_grid(2.0, 64)


@pytest.fixture(scope="session")
def corpus():
    return default_corpus()


ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def accept():
    """Record one PASS/FAIL line for an acceptance criterion, then assert it."""

    def record(criterion: int, ok: bool, detail: str) -> None:
        line = f"[{'PASS' if ok else 'FAIL'}] criterion {criterion}: {detail}"
        ACCEPTANCE_LINES.append(line)
        print(line)
        assert ok, line

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
