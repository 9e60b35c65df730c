"""Prints one PASS/FAIL line per acceptance criterion at the end of the run."""

from __future__ import annotations

_DOCS: dict[str, str] = {}
_RESULTS: dict[str, str] = {}


def pytest_collection_modifyitems(items):
    for item in items:
        if item.name.startswith("test_criterion") and item.function.__doc__:
            _DOCS[item.name] = item.function.__doc__.strip().splitlines()[0]


def pytest_runtest_logreport(report):
    name = report.nodeid.split("::")[-1]
    if not name.startswith("test_criterion"):
        return
    if report.when == "call" or report.failed:
        _RESULTS[name] = "PASS" if report.passed else "FAIL"


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(_RESULTS):
        terminalreporter.write_line(f"{_RESULTS[name]}  {_DOCS.get(name, name)}")
