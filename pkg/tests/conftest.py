"""Shared fixtures and the acceptance summary."""
from __future__ import annotations

import re

import pytest

from cuspcert.census import load_census

# small triangulations used throughout the suite
FIG8 = "cPcbbbiht"  # ideal figure-eight knot complement
LST = "bGaj"  # one-tetrahedron layered solid torus
TREFOIL = "eHLObcdddwuj"  # material trefoil knot exterior
KB_BUNDLE = "dHPabccdjw"  # twisted I-bundle over the Klein bottle, closed off
S2XS1 = "cMcabbjaj"  # closed two-tetrahedron S^2 x S^1
NONSTRICT = "cPcbbbadu"  # ideal, angle structures exist but none strict


@pytest.fixture(scope="session")
def census():
    return load_census()


_CRITERION = re.compile(r"test_criterion_(\d+)_(\w+)")
_results: dict[int, tuple[str, str, float]] = {}


def pytest_runtest_logreport(report):
    m = _CRITERION.search(report.nodeid)
    if not m:
        return
    k = int(m.group(1))
    if report.when == "call" or report.outcome != "passed":
        prev = _results.get(k)
        outcome = report.outcome
        if prev is not None and prev[0] != "passed":
            outcome = prev[0]
        _results[k] = (outcome, m.group(2).replace("_", " "), report.duration)


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(_results):
        outcome, name, dur = _results[k]
        mark = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"criterion {k:2d}: {mark}  {name} ({dur:.1f} s)")
