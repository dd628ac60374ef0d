"""Per-criterion summary for the acceptance suite."""

import re

_CRITERION = re.compile(r"test_criterion_(\d+)")
_results: dict[int, dict] = {}


def _number(nodeid: str) -> int | None:
    if "test_acceptance.py" not in nodeid:
        return None
    m = _CRITERION.search(nodeid)
    return int(m.group(1)) if m else None


def pytest_collection_modifyitems(items):
    for item in items:
        k = _number(item.nodeid)
        if k is not None:
            doc = (item.function.__doc__ or "").strip().splitlines()
            _results[k] = {"title": doc[0] if doc else item.name, "outcome": None, "secs": 0.0}


def pytest_runtest_logreport(report):
    k = _number(report.nodeid)
    if k is None or k not in _results:
        return
    entry = _results[k]
    if report.when == "call":
        entry["secs"] = report.duration
    if report.failed:
        entry["outcome"] = "FAIL"
    elif report.when == "call" and entry["outcome"] is None:
        entry["outcome"] = "PASS"


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(_results):
        e = _results[k]
        outcome = e["outcome"] or "NOT RUN"
        terminalreporter.write_line(f"{outcome}  criterion {k:2d}  ({e['secs']:.1f}s)  {e['title']}")
