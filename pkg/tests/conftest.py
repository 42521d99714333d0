import re

import pytest

_acceptance = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(criterion, text): acceptance criterion id and summary")


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.outcome != "passed"):
        return
    marker = report.user_properties and dict(report.user_properties).get("acceptance")
    if marker:
        _acceptance[report.nodeid] = (marker, report.outcome)


@pytest.fixture(autouse=True)
def _tag_acceptance(request, record_property):
    m = request.node.get_closest_marker("acceptance")
    if m is not None:
        record_property("acceptance", f"{m.args[0]:<4} {m.args[1]}")


def _natural(item):
    num, rest = re.match(r"(\d+)(\S*)", item[0]).groups()
    return int(num), rest


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for (label, outcome) in sorted(_acceptance.values(), key=_natural):
        terminalreporter.write_line(f"{'PASS' if outcome == 'passed' else 'FAIL'}  {label}")
