import math

import numpy as np
import pytest

from censored_tail.distributions import CensoredSample

_criteria = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion this test checks")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None or report.when not in ("setup", "call"):
        return
    number, title = marker.args
    entry = _criteria.setdefault(number, {"title": title, "passed": True, "count": 0})
    if report.when == "call":
        entry["count"] += 1
    if report.failed:
        entry["passed"] = False


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_criteria):
        entry = _criteria[number]
        status = "PASS" if entry["passed"] else "FAIL"
        terminalreporter.write_line(f"[{status}] criterion {number}: {entry['title']} ({entry['count']} checks)")


@pytest.fixture
def toy_sample():
    """z = [1, 2, 3, 4], delta = [1, 0, 1, 1]."""
    return CensoredSample([1.0, 2.0, 3.0, 4.0], [1, 0, 1, 1])


@pytest.fixture
def log_sample():
    """z = [2e, 1, 2e^2], all uncensored: log-excesses over t=2 are 1 and 2."""
    return CensoredSample([2 * math.e, 1.0, 2 * math.e**2], [1, 1, 1])


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
