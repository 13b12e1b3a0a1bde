from __future__ import annotations

from collections import OrderedDict

import pytest
from hypothesis import settings

# sympy oracles have erratic first-call latency
settings.register_profile("default", deadline=None, max_examples=50)
settings.load_profile("default")

_CRITERIA: OrderedDict[int, dict] = OrderedDict()


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None or rep.when != "call" and not (rep.when == "setup" and rep.failed):
        return
    k, title = mark.args
    entry = _CRITERIA.setdefault(k, {"title": title, "passed": 0, "failed": []})
    if rep.passed:
        entry["passed"] += 1
    else:
        entry["failed"].append(item.name)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for k in sorted(_CRITERIA):
        e = _CRITERIA[k]
        total = e["passed"] + len(e["failed"])
        verdict = "PASS" if not e["failed"] else "FAIL"
        line = f"criterion {k:2d}  {verdict}  {e['title']}  ({e['passed']}/{total} checks)"
        if e["failed"]:
            line += "  failing: " + ", ".join(e["failed"])
        tr.write_line(line)
