"""Shared pytest wiring.

The acceptance module records one verdict line per release criterion; echo
them in the terminal summary so every run shows the full scorecard even
under default output capture.
"""

import sys


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "CRITERION_LINES", None) if mod else None
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
