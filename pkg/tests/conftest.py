"""Shared fixtures and the acceptance summary printed after the run."""
from collections import OrderedDict

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

_criteria: "OrderedDict[str, list[tuple[str, str]]]" = OrderedDict()


def pytest_collection_modifyitems(items):
    for item in items:
        mark = item.get_closest_marker("acceptance")
        if mark is not None:
            _criteria.setdefault(mark.args[0], [])


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    mark = item.get_closest_marker("acceptance")
    if mark is None:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        _criteria[mark.args[0]].append((item.nodeid, report.outcome))


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for name, results in _criteria.items():
        if not results:
            status = "NOT RUN"
        elif all(outcome == "passed" for _, outcome in results):
            status = "PASS"
        else:
            status = "FAIL"
        passed = sum(outcome == "passed" for _, outcome in results)
        terminalreporter.write_line(f"{status:8} {name} ({passed}/{len(results)} checks)")
