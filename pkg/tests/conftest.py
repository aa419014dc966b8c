from __future__ import annotations

from pathlib import Path

import pytest

from compose_patterns import kernels

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture(params=["python", "cython"])
def kernel_backend(request, monkeypatch):
    """Run a test once per kernel implementation."""
    if request.param == "python":
        monkeypatch.setattr(kernels, "_compiled", None)
    elif kernels._compiled is None:
        pytest.skip("compiled kernels not built")
    return request.param


@pytest.fixture
def fixtures() -> Path:
    return FIXTURES


_acceptance: dict[int, tuple[str, str]] = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    marker = item.get_closest_marker("acceptance")
    if marker is None:
        return
    report = outcome.get_result()
    number, title = marker.args
    if report.when == "call" or (report.when == "setup" and not report.passed):
        _acceptance[number] = (title, "PASS" if report.passed else "FAIL")


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_acceptance):
        title, status = _acceptance[number]
        terminalreporter.write_line(f"[{status}] criterion {number}: {title}")
