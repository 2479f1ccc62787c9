import os
import sys
import warnings

import pytest

sys.path.insert(0, os.path.dirname(__file__))

# numba emits a harmless warning when its TBB layer is older than expected
warnings.filterwarnings("ignore", module="numba")

HEAVY = os.environ.get("NORMUNITS_HEAVY") == "1"


def pytest_configure(config):
    config.addinivalue_line("markers", "heavy: order-32 exhaustive walks; set NORMUNITS_HEAVY=1 to run")


def pytest_collection_modifyitems(config, items):
    if HEAVY:
        return
    skip = pytest.mark.skip(reason="heavy walk; set NORMUNITS_HEAVY=1")
    for item in items:
        if "heavy" in item.keywords:
            item.add_marker(skip)


ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def verdict():
    """Record one PASS/FAIL line per acceptance criterion."""

    def record(number: int, title: str, ok: bool, detail: str = ""):
        line = f"criterion {number:>2}: {'PASS' if ok else 'FAIL'}  {title}"
        if detail:
            line += f"  ({detail})"
        ACCEPTANCE_LINES.append(line)
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
