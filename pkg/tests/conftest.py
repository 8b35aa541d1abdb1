import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"

_acceptance_lines: list[str] = []


@pytest.fixture
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture
def criterion():
    """Record one acceptance criterion outcome; asserts it afterwards."""

    def record(number: int, title: str, ok: bool, detail: str) -> None:
        _acceptance_lines.append(f"[{'PASS' if ok else 'FAIL'}] C{number} {title}: {detail}")
        assert ok, detail

    return record


def pytest_terminal_summary(terminalreporter):
    if _acceptance_lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_acceptance_lines, key=lambda s: int(s.split()[1][1:])):
            terminalreporter.write_line(line)
