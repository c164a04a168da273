import pytest

ACCEPTANCE_LINES: dict = {}


@pytest.fixture
def acceptance():
    """Record one summary line per acceptance criterion."""

    def record(number: int, passed: bool, text: str, seconds: float, limit: float):
        status = "PASS" if passed else "FAIL"
        line = f"[{status}] criterion {number}: {text} ({seconds:.2f}s, limit {limit:g}s)"
        ACCEPTANCE_LINES[number] = line
        print(line)

    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[number])
