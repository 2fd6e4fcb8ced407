import pytest

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def criterion():
    """Record one PASS/FAIL line per acceptance criterion."""
    from contextlib import contextmanager

    @contextmanager
    def record(number: int, text: str):
        try:
            yield
        except BaseException:
            ACCEPTANCE_LINES.append(f"criterion {number}: FAIL  {text}")
            print(ACCEPTANCE_LINES[-1])
            raise
        ACCEPTANCE_LINES.append(f"criterion {number}: PASS  {text}")
        print(ACCEPTANCE_LINES[-1])

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
