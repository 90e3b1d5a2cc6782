import pytest

from plcrn.fixtures import carbon_cycle, reversible_pair, toy_system


@pytest.fixture
def carbon():
    return carbon_cycle()


@pytest.fixture
def toy():
    return toy_system()


@pytest.fixture
def pair():
    return reversible_pair()


_CRITERIA: dict[int, tuple[str, str, float]] = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("acceptance")
    if mark is None:
        return
    num, title = mark.args
    if rep.when == "call" or (rep.when == "setup" and rep.failed):
        _, prev, secs = _CRITERIA.get(num, (title, "PASS", 0.0))
        verdict = "PASS" if rep.passed and prev == "PASS" else "FAIL"
        _CRITERIA[num] = (title, verdict, secs + rep.duration)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(_CRITERIA):
        title, verdict, secs = _CRITERIA[num]
        terminalreporter.write_line(f"criterion {num:2d}  {verdict}  {title}  ({secs:.2f} s)")
