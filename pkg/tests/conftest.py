"""Shared fixtures and the acceptance-summary hook.

Tests marked ``@pytest.mark.acceptance(criterion=<n>, label=<text>)`` are
release-gate checks.  After the run, the terminal summary prints one
PASS/FAIL line per criterion so the gate status is readable at a glance
even in a long -v log.  A criterion with several parametrized cases counts
as PASS only if every case passed.
"""

from __future__ import annotations

import pytest

_RESULTS: dict[int, dict[str, object]] = {}


@pytest.hookimpl(wrapper=True)
def pytest_runtest_makereport(item, call):
    report = yield
    marker = item.get_closest_marker("acceptance")
    if marker is not None and report.when == "call":
        crit = marker.kwargs.get("criterion", marker.args[0] if marker.args else 0)
        label = marker.kwargs.get("label", "")
        entry = _RESULTS.setdefault(crit, {"label": label, "failed": [], "passed": 0})
        if report.passed:
            entry["passed"] = entry["passed"] + 1  # type: ignore[operator]
        else:
            entry["failed"].append(item.name)  # type: ignore[union-attr]
    return report


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _RESULTS:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for crit in sorted(_RESULTS):
        entry = _RESULTS[crit]
        failed = entry["failed"]
        label = entry["label"]
        if failed:
            detail = ", ".join(failed[:4])  # keep the line short
            if len(failed) > 4:
                detail += f", +{len(failed) - 4} more"
            tr.write_line(f"criterion {crit}: FAIL  {label}  [{detail}]", red=True)
        else:
            tr.write_line(f"criterion {crit}: PASS  {label}", green=True)
