"""Shared fixtures and the per-criterion pass/fail summary."""
from __future__ import annotations

from collections import OrderedDict

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "artifact",
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
    derandomize=True,
)
settings.load_profile("artifact")

_CRITERIA: "OrderedDict[int, bool]" = OrderedDict()


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n): acceptance criterion number")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    num = int(mark.args[0])
    if rep.when == "call" or (rep.when == "setup" and not rep.passed):
        _CRITERIA[num] = _CRITERIA.get(num, True) and rep.passed


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(_CRITERIA):
        terminalreporter.write_line(f"criterion {num}: {'PASS' if _CRITERIA[num] else 'FAIL'}")


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture(params=["stratonovich", "stratonovich-alt", "berezin",
                        "berezin-alt", "toeplitz", "toeplitz-alt"])
def family(request):
    return request.param
