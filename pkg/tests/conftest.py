import pytest

from relimp import data_path
from relimp.io import load_game, load_system


@pytest.fixture(scope="session")
def gab():
    return load_system(data_path("systems", "gab.json"))


@pytest.fixture(scope="session")
def birstruct():
    return load_system(data_path("systems", "birstruct.json"))


@pytest.fixture
def desk_game():
    def _load(name):
        return load_game(data_path("games", f"{name}.json"))

    return _load


# -- acceptance criteria reporting ------------------------------------------

_CRITERIA = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is None or (report.when != "call" and not report.failed):
        return
    number, title = marker.args
    detail = dict(item.user_properties).get("detail", "")
    previous = _CRITERIA.get(number)
    passed = report.passed and (previous is None or previous[0])
    _CRITERIA[number] = (passed, title, detail)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.write_sep("=", "acceptance criteria")
    for number in sorted(_CRITERIA):
        passed, title, detail = _CRITERIA[number]
        line = f"criterion {number:>2}: {'PASS' if passed else 'FAIL'}  {title}"
        if detail:
            line += f" -- {detail}"
        terminalreporter.write_line(line)
