"""Shared pytest wiring for the suite.

The acceptance tests record one ``[PASS]``/``[FAIL]`` line per criterion.
During the run those lines are hidden by pytest's output capture whenever
the test passes, so this hook replays them in a dedicated section at the
end, where they survive into piped or teed logs.
"""

import sys


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    module = sys.modules.get("test_acceptance")
    lines = getattr(module, "REPORT_LINES", None)
    if not lines:
        return
    terminalreporter.section("acceptance criteria")
    for line in lines:
        terminalreporter.write_line(line)
