import re

_CRITERION = re.compile(r"test_criterion_(\d+)_(\w+)")
_results: dict[int, tuple[str, str]] = {}


def pytest_runtest_logreport(report):
    m = _CRITERION.search(report.nodeid)
    if not m:
        return
    num, name = int(m.group(1)), m.group(2).replace("_", " ")
    if report.when == "call" or report.outcome != "passed":
        status = "PASS" if report.passed else ("SKIP" if report.skipped else "FAIL")
        if _results.get(num, (name, "PASS"))[1] == "FAIL":
            status = "FAIL"
        _results[num] = (name, status)


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(_results):
        name, status = _results[num]
        terminalreporter.write_line(f"criterion {num:2d} {status}  {name}")
