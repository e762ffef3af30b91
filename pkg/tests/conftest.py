"""Shared pytest hooks.

Acceptance checks carry ``@pytest.mark.acceptance(n, "title")``; the
terminal summary prints one PASS/FAIL line for each.
"""

import pytest

_OUTCOMES: dict = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(number, title): numbered acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    mark = item.get_closest_marker("acceptance")
    if mark is None:
        return
    number, title = mark.args
    key = (number, title)
    if report.when == "call" or report.failed:
        prev = _OUTCOMES.get(key, "PASS")
        _OUTCOMES[key] = "FAIL" if (report.failed or prev == "FAIL") else "PASS"
    if report.skipped:
        _OUTCOMES.setdefault(key, "SKIP")


def pytest_terminal_summary(terminalreporter):
    if not _OUTCOMES:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for (number, title), status in sorted(_OUTCOMES.items()):
        tr.write_line(f"{status:4}  {number:2d}. {title}")
    passed = sum(1 for s in _OUTCOMES.values() if s == "PASS")
    tr.write_line(f"{passed}/{len(_OUTCOMES)} criteria passed")
