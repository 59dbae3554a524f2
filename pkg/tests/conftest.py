import pytest

CRITERIA = {
    1: "formula suite",
    2: "Fermat deterministic certificate",
    3: "identifiability grid",
    4: "dimension grid",
    5: "binary orbit counts",
    6: "bound checks",
    7: "containment property",
    8: "invariant suites",
    9: "quadric sanity",
}

_outcomes: dict[int, list[bool]] = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    if report.when == "call" or (report.when == "setup" and not report.passed):
        _outcomes.setdefault(marker.args[0], []).append(report.passed)


def pytest_terminal_summary(terminalreporter):
    if not _outcomes:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(_outcomes):
        results = _outcomes[k]
        status = "PASS" if all(results) else "FAIL"
        terminalreporter.write_line(
            f"criterion {k} ({CRITERIA.get(k, '?')}): {status} "
            f"[{sum(results)}/{len(results)} checks]")
