import pytest

from bentsrg.field import make_field

CRITERIA_LINES: dict[int, str] = {}


def pytest_addoption(parser):
    parser.addoption("--runslow", action="store_true", default=False, help="run slow tests")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow"):
        return
    skip = pytest.mark.skip(reason="needs --runslow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip)


def pytest_terminal_summary(terminalreporter):
    if not CRITERIA_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(CRITERIA_LINES):
        terminalreporter.write_line(CRITERIA_LINES[n])


@pytest.fixture(scope="session")
def fields():
    cache = {}

    def get(p, n):
        if (p, n) not in cache:
            cache[(p, n)] = make_field(p, n)
        return cache[(p, n)]

    return get


@pytest.fixture
def record_criterion():
    def record(number: int, title: str, ok: bool, detail: str) -> str:
        line = f"criterion {number} [{title}]: {'PASS' if ok else 'FAIL'} ({detail})"
        CRITERIA_LINES[number] = line
        print(line)
        return line

    return record
