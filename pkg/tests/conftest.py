import time
from importlib import resources

import pytest

from higher_ar.ctcat import knit, tensor_category
from higher_ar.quiver import parse_quiver

_ACCEPTANCE: dict[str, tuple[int, str, str, float]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(number, title): acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_call(item):
    start = time.perf_counter()
    yield
    item._elapsed = time.perf_counter() - start


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is None or report.when != "call":
        return
    number, title = marker.args
    _ACCEPTANCE[item.nodeid] = (number, title, "PASS" if report.passed else "FAIL",
                                getattr(item, "_elapsed", 0.0))


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number, title, status, elapsed in sorted(_ACCEPTANCE.values()):
        terminalreporter.write_line(f"criterion {number}: {status}  {title}  ({elapsed:.2f}s)")


def a5_text() -> str:
    return (resources.files("higher_ar") / "data" / "a5.q").read_text(encoding="utf-8")


@pytest.fixture(scope="session")
def a5_quiver():
    return parse_quiver(a5_text(), "A5")


@pytest.fixture(scope="session")
def a5(a5_quiver):
    return knit(a5_quiver)


@pytest.fixture(scope="session")
def a5a5(a5):
    return tensor_category(a5, a5)
