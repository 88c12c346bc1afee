from __future__ import annotations

import re

_CRITERIA = {
    1: "classifier round trip on normal forms and disguises",
    2: "impossibility fingerprints",
    3: "coefficient-relation constants",
    4: "Weierstrass p certification",
    5: "Fermat identities",
    6: "F10 solution and order of growth",
    7: "F1, F3, F5 solutions",
    8: "exact squared-orbit periods",
    9: "QRT orbits and conjugation",
    10: "F9 hyper-order signature",
}

_results: dict[int, list[str]] = {}


def pytest_runtest_logreport(report):
    m = re.search(r"test_acceptance\.py::test_criterion_(\d+)", report.nodeid)
    if not m:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        _results.setdefault(int(m.group(1)), []).append(report.outcome)


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    terminalreporter.section("acceptance criteria")
    for k, title in _CRITERIA.items():
        if k not in _results:
            continue
        ok = all(o == "passed" for o in _results[k])
        terminalreporter.write_line(f"criterion {k:2d}: {'PASS' if ok else 'FAIL'}  {title}")
