import time
from collections import defaultdict

import pytest

_SESSION = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion a test belongs to")
    _SESSION["start"] = time.perf_counter()
    _SESSION["criteria"] = {}
    _SESSION["outcomes"] = defaultdict(list)
    _SESSION["nodes"] = {}


def session_elapsed() -> float:
    return time.perf_counter() - _SESSION["start"]


def pytest_collection_modifyitems(config, items):
    tagged = []
    for item in items:
        mark = item.get_closest_marker("criterion")
        if mark is not None:
            number, title = mark.args
            _SESSION["criteria"][number] = title
            _SESSION["nodes"][item.nodeid] = number
            tagged.append((number, item))
    # the timing criterion measures the whole session, so it runs last
    last = [item for number, item in tagged if number == 16]
    items[:] = [item for item in items if item not in last] + last


def pytest_runtest_logreport(report):
    number = _SESSION["nodes"].get(report.nodeid)
    if number is None:
        return
    if report.when == "call" or report.outcome != "passed":
        _SESSION["outcomes"][number].append(report.outcome)


def pytest_terminal_summary(terminalreporter):
    criteria = _SESSION.get("criteria")
    if not criteria:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(criteria):
        outcomes = _SESSION["outcomes"].get(number, [])
        if not outcomes:
            verdict = "NOT RUN"
        elif all(o == "passed" for o in outcomes):
            verdict = "PASS"
        else:
            verdict = "FAIL"
        terminalreporter.write_line(f"criterion {number:2d}  {verdict:7s}  {criteria[number]}")


@pytest.fixture
def elapsed():
    return session_elapsed
