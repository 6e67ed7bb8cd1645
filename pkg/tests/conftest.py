"""Shared fixtures plus a PASS/FAIL summary line per acceptance criterion."""

from __future__ import annotations

from collections import defaultdict
from pathlib import Path

import pytest

from kmap_ecc import reference_placements

FIXTURES = Path(__file__).parent / "fixtures"

_criterion_results: dict[tuple[int, str], list[bool]] = defaultdict(list)


def pytest_configure(config):
    config.addinivalue_line(
        "markers", "criterion(num, name): acceptance criterion this test checks")
    config.addinivalue_line("markers", "slow: takes tens of seconds")


def pytest_runtest_logreport(report):
    if report.when != "call":
        return
    marker = None
    for m in getattr(report, "_criterion_marks", ()):
        marker = m
    if marker:
        _criterion_results[marker].append(report.passed)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark:
        report._criterion_marks = [(mark.args[0], mark.args[1])]


def pytest_terminal_summary(terminalreporter):
    if not _criterion_results:
        return
    terminalreporter.section("acceptance criteria")
    for (num, name) in sorted(_criterion_results):
        results = _criterion_results[(num, name)]
        status = "PASS" if all(results) else "FAIL"
        terminalreporter.write_line(
            f"criterion {num:2d} [{status}] {name} ({sum(results)}/{len(results)} checks)")


@pytest.fixture(scope="session")
def refs():
    return reference_placements()


@pytest.fixture(scope="session")
def fixture_dir():
    return FIXTURES
