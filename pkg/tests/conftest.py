import pytest

ACCEPTANCE_FILE = "test_acceptance.py"


def pytest_terminal_summary(terminalreporter):
    """One PASS/FAIL line per acceptance criterion, in file order."""
    lines = []
    for outcome in ("passed", "failed", "error"):
        for report in terminalreporter.stats.get(outcome, []):
            if ACCEPTANCE_FILE not in getattr(report, "nodeid", ""):
                continue
            if report.when != "call" and outcome != "error":
                continue
            doc = getattr(report, "criterion", None) or report.nodeid.split("::")[-1]
            lines.append((report.location[1], "PASS" if outcome == "passed" else "FAIL", doc))
    if not lines:
        return
    terminalreporter.section("acceptance criteria")
    for _, verdict, doc in sorted(lines):
        terminalreporter.write_line(f"{verdict}  {doc}")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    criterion = getattr(item.function, "criterion", None)
    if criterion:
        report.criterion = criterion
