"""Collects acceptance-criterion outcomes and prints one line per criterion."""

from collections import defaultdict

import pytest

CRITERIA = {
    1: "exact-rank recovery, every scheme, rel err <= 1e-10",
    2: "rSVD mean error within 1.05x its Frobenius bound",
    3: "GN mean error within 1.05x its Frobenius bound",
    4: "GN-c mean error within 1.05x its Frobenius and spectral bounds",
    5: "paired-seed ordering GN-c <= rSVD (hard), rSVD <= GN (soft)",
    6: "Nystrom truncation inequality on every SPSD instance",
    7: "projector identities over >= 100 random instances each",
    8: "sketch operator suite",
    9: "Matrix Market round-trip, malformed corpus, CSV parse-back",
    10: "sweep replay determinism on non-timing columns",
}

_outcomes = defaultdict(list)
_notes = defaultdict(list)


@pytest.fixture
def note(request):
    """Attach a one-line detail to the criterion of the calling test."""
    marker = request.node.get_closest_marker("criterion")

    def add(text):
        if marker is not None:
            _notes[marker.args[0]].append(text)

    return add


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    if report.when == "call" or (report.when == "setup" and not report.passed):
        _outcomes[marker.args[0]].append(report.passed)


def pytest_terminal_summary(terminalreporter):
    if not _outcomes:
        return
    terminalreporter.section("acceptance criteria")
    for n, text in CRITERIA.items():
        results = _outcomes.get(n)
        if not results:
            status = "NOT RUN"
        else:
            status = "PASS" if all(results) else "FAIL"
        terminalreporter.write_line(f"criterion {n:>2}: {status:<7} {text} ({len(results or [])} tests)")
        for detail in _notes.get(n, []):
            terminalreporter.write_line(f"              {detail}")
