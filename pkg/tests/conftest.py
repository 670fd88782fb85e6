import itertools

import numpy as np
import pytest
from hypothesis import settings

from resolvent.perm import SetPartition

settings.register_profile("ci", max_examples=60, deadline=None)
settings.load_profile("ci")


def set_partitions(n):
    """All set partitions of {1..n}, built by inserting each element in turn."""
    parts = [[]]
    for x in range(1, n + 1):
        nxt = []
        for p in parts:
            for i in range(len(p)):
                nxt.append(p[:i] + [p[i] + [x]] + p[i + 1:])
            nxt.append(p + [[x]])
        parts = nxt
    return [SetPartition(tuple(tuple(b) for b in p)) for p in parts]


def perm_sign(images):
    inv = sum(1 for i, j in itertools.combinations(range(len(images)), 2) if images[i] > images[j])
    return -1 if inv % 2 else 1


def match_multisets(a, b):
    """Largest distance in the best pairing of two equal-size point sets."""
    from scipy.optimize import linear_sum_assignment

    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    cost = np.abs(a[:, None] - b[None, :])
    r, c = linear_sum_assignment(cost)
    return float(cost[r, c].max())


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


# acceptance reporting ---------------------------------------------------------

_CRITERIA = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None or report.when != "call" and not report.failed:
        return
    number = mark.args[0]
    title = getattr(item.module, "TITLES", {}).get(number, "")
    entry = _CRITERIA.setdefault(number, {"title": title, "failed": [], "ran": 0})
    if report.when == "call":
        entry["ran"] += 1
    if report.failed:
        entry["failed"].append(item.name)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        entry = _CRITERIA[number]
        status = "FAIL" if entry["failed"] else "PASS"
        line = f"criterion {number:2d}: {status}  {entry['title']}"
        if entry["failed"]:
            line += f"  (failing: {', '.join(entry['failed'])})"
        terminalreporter.write_line(line)
