import json
from pathlib import Path

import pytest

from complexaj.qdilog import DilogParams

FROZEN = Path(__file__).parent / "oracles" / "frozen.json"


@pytest.fixture(scope="session")
def frozen():
    return json.loads(FROZEN.read_text())


@pytest.fixture(scope="session")
def params():
    return DilogParams()


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import LINES

    if LINES:
        terminalreporter.section("acceptance criteria")
        for n in sorted(LINES):
            terminalreporter.write_line(LINES[n])
