import numpy as np
import pytest

# criterion number -> [description, passed, failed]
_CRITERIA: dict[int, list] = {}


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None or (rep.when != "call" and not (rep.when == "setup" and rep.failed)):
        return
    number, desc = mark.args
    entry = _CRITERIA.setdefault(number, [desc, 0, 0])
    entry[1 if rep.passed else 2] += 1


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        desc, passed, failed = _CRITERIA[number]
        status = "PASS" if failed == 0 and passed > 0 else "FAIL"
        terminalreporter.write_line(f"criterion {number}: {status}  {desc}  ({passed} passed, {failed} failed)")
