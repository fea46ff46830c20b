from __future__ import annotations

import pytest

from eulerzeta.cli import load_golden

ACCEPTANCE_LINES: dict[str, str] = {}


@pytest.fixture(scope="session")
def golden() -> dict:
    return load_golden()


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split(".")[0])):
        terminalreporter.write_line(ACCEPTANCE_LINES[key])
