from __future__ import annotations

import functools

import pytest

from normcay import context


@functools.lru_cache(maxsize=None)
def ctx(spec: str):
    """Group, classes and character table, cached across the test session."""
    c = context.load(spec)
    c.table  # build eagerly so later monkeypatching cannot leak into the cache
    return c


@pytest.fixture
def a4():
    return ctx("alternating:4")


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, text): acceptance criterion covered by a test")
    config._acceptance = {}


def pytest_runtest_logreport(report):
    marker = getattr(report, "_criterion", None)
    if marker is None:
        return
    table = report.config_acceptance
    number, text = marker
    ok = not (report.failed or report.skipped)
    texts, prev_ok = table.get(number, ([], True))
    if text not in texts:
        texts.append(text)
    table[number] = (texts, prev_ok and ok)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    m = item.get_closest_marker("criterion")
    if m is not None:
        report._criterion = (m.args[0], m.args[1])
        report.config_acceptance = item.config._acceptance


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    table = getattr(config, "_acceptance", {})
    if not table:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(table):
        texts, ok = table[number]
        terminalreporter.write_line(f"criterion {number:2d}: {'PASS' if ok else 'FAIL'}  {'; '.join(texts)}")
