import pytest

ACCEPTANCE_TITLES = {
    1: "design inversion",
    2: "resonator design",
    3: "spectroscopy inversion",
    4: "pulse dynamics",
    5: "photon-source efficiency",
    6: "S21 fit",
    7: "Lindblad engine properties",
    8: "transmon diagonalization properties",
    9: "dressed-level properties",
    10: "monotonicity",
}

_outcomes = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n): acceptance criterion number")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    n = marker.args[0]
    failed = report.failed or (report.when == "call" and report.skipped)
    if report.when == "call" or failed:
        _outcomes.setdefault(n, []).append(not failed)


def pytest_terminal_summary(terminalreporter):
    if not _outcomes:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_outcomes):
        results = _outcomes[n]
        status = "PASS" if all(results) else "FAIL"
        terminalreporter.write_line(
            f"criterion {n:>2} {status}  {ACCEPTANCE_TITLES.get(n, '')} ({sum(results)}/{len(results)} checks)"
        )
