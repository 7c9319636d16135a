"""Collects acceptance outcomes and prints one verdict line per criterion."""

from __future__ import annotations

import pytest

_verdicts: dict[str, dict[str, object]] = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item: pytest.Item, call: pytest.CallInfo):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    key, title = marker.args
    entry = _verdicts.setdefault(key, {"title": title, "passed": True, "failures": []})
    failed = report.failed or (report.when == "call" and report.skipped)
    if failed:
        entry["passed"] = False
        entry["failures"].append(item.name)


def pytest_terminal_summary(terminalreporter) -> None:
    if not _verdicts:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(_verdicts, key=lambda k: int(k.removeprefix("AC"))):
        entry = _verdicts[key]
        status = "PASS" if entry["passed"] else "FAIL"
        line = f"{key} {status}  {entry['title']}"
        if entry["failures"]:
            line += f"  (failed: {', '.join(entry['failures'])})"
        terminalreporter.write_line(line)
