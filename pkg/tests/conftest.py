from __future__ import annotations

import pytest

_LINES: list[str] = []


@pytest.fixture
def verdict():
    """Record one PASS/FAIL line for the acceptance report, then assert."""

    def record(label: str, checks: list[tuple[str, bool]]):
        failed = [name for name, ok in checks if not ok]
        line = f"{label}: {'PASS' if not failed else 'FAIL'}"
        if failed:
            line += " (" + "; ".join(failed) + ")"
        _LINES.append(line)
        print(line)
        assert not failed, line

    return record


def pytest_terminal_summary(terminalreporter):
    if _LINES:
        terminalreporter.section("acceptance criteria")
        for line in _LINES:
            terminalreporter.write_line(line)
