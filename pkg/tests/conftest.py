import os

import pytest

#: one line per acceptance criterion, filled in by test_acceptance.py
ACCEPTANCE_LINES = []


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: long-running checks (set CASIMIR_LAB_FULL=1)")


def pytest_collection_modifyitems(config, items):
    if os.environ.get("CASIMIR_LAB_FULL"):
        return
    skip = pytest.mark.skip(reason="long-running; set CASIMIR_LAB_FULL=1 to run")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for line in sorted(ACCEPTANCE_LINES, key=lambda s: s.split(":")[0]):
        terminalreporter.write_line(line)
