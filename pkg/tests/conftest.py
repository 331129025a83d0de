"""Prints one pass/fail line per numbered acceptance criterion."""

_CRITERIA: dict[int, str] = {}


def pytest_runtest_logreport(report):
    if report.when != "call":
        return
    name = report.nodeid.rsplit("::", 1)[-1]
    if name.startswith("test_criterion_"):
        number = int(name.split("_")[2])
        _CRITERIA[number] = report.outcome


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        verdict = "PASS" if _CRITERIA[number] == "passed" else "FAIL"
        terminalreporter.write_line(f"criterion {number}: {verdict}")
