import pytest

_results = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion covered by the test")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    key = (marker.args[0], item.name)
    if report.when == "call" or (report.when == "setup" and not report.passed):
        if hasattr(report, "wasxfail"):
            status = "FAIL (expected, see xfail reason)" if report.skipped else "PASS (unexpectedly)"
        else:
            status = "PASS" if report.passed else "FAIL"
        _results[key] = (marker.args[1], status)


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    terminalreporter.section("acceptance criteria")
    for (number, name), (title, status) in sorted(_results.items(), key=lambda kv: kv[0]):
        terminalreporter.write_line(f"criterion {number}: {status}: {title} [{name}]")
