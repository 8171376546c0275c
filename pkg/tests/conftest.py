"""Shared pytest hooks.

pytest captures stdout while tests run, so the ACCEPTANCE verdict lines
printed inside tests/test_acceptance.py only show on a -s run.  The terminal
summary happens after capture ends; replaying the verdicts there makes a
plain `pytest -v` transcript carry the gate results as well.
"""

ACCEPTANCE_RESULTS = []


def record_criterion(name, passed):
    ACCEPTANCE_RESULTS.append((name, passed))


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance gate")
    for name, passed in ACCEPTANCE_RESULTS:
        terminalreporter.write_line(f"ACCEPTANCE {name}: {'PASS' if passed else 'FAIL'}")
