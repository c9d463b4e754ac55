import os

import pytest
from hypothesis import HealthCheck, settings

# Ring-axiom properties run at least 500 cases; the profile can be raised but not lowered below that.
settings.register_profile(
    "default",
    max_examples=500,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large],
    derandomize=True,
)
settings.load_profile(os.environ.get("GENMAT_HYPOTHESIS_PROFILE", "default"))


# -- acceptance summary ----------------------------------------------------------------
# Tests marked ``criterion(k, title)`` report one PASS/FAIL line each at the end of the run.

_ACCEPTANCE: dict = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion covered by the test")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    number, title = mark.args
    if rep.when == "call" or rep.outcome != "passed":
        prev = _ACCEPTANCE.get(number)
        ok = rep.outcome == "passed" and (prev is None or prev[1])
        _ACCEPTANCE[number] = (title, ok, rep.duration)


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(_ACCEPTANCE):
        title, ok, secs = _ACCEPTANCE[k]
        terminalreporter.write_line(f"criterion {k}: {'PASS' if ok else 'FAIL'}  {title}  ({secs:.1f} s)")
