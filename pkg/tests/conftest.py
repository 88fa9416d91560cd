import json
from pathlib import Path

import pytest

DATA = Path(__file__).resolve().parent / "data"

# one line per acceptance criterion, filled in by test_acceptance.py
ACCEPTANCE_LINES: dict = {}


@pytest.fixture(scope="session")
def derived():
    """Frozen oracle values, keyed by name; see tests/oracles/derive.py."""
    table = json.loads((DATA / "derived.json").read_text())
    return {k: v["value"] for k, v in table.items()}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[n])
