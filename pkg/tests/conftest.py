import json
from pathlib import Path

import pytest

from uvorbits.bipoly import parse

DATA = Path(__file__).parent / "data"


@pytest.fixture(scope="session")
def closed_forms():
    return json.loads((DATA / "closed_forms.json").read_text())


@pytest.fixture(scope="session")
def P():
    return parse


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS

    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for k in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[k])
