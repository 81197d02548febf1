import csv
import sys
from importlib.resources import files
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

DATA = Path(str(files("robust_doe") / "data"))
TABLES = DATA / "median_barrier"


def read_table(name):
    with open(TABLES / name, newline="", encoding="utf-8") as fh:
        return list(csv.DictReader(fh))


@pytest.fixture(scope="session")
def data_dir():
    return DATA


@pytest.fixture(scope="session")
def tables_dir():
    return TABLES


@pytest.fixture(scope="session")
def example_spec():
    from robust_doe.files import load_spec

    return load_spec(DATA / "median_barrier_spec.json")


@pytest.fixture(scope="session")
def barrier_responses():
    from robust_doe.files import read_response_csv

    return {
        "acceleration": read_response_csv(TABLES / "acceleration.csv", (9, 4)),
        "deflection": read_response_csv(TABLES / "deflection.csv", (9, 4)),
    }


@pytest.fixture(scope="session")
def table10():
    rows = read_table("table10_normalized.csv")
    return np.array([[float(r["acceleration"]), float(r["deflection"])] for r in rows])


@pytest.fixture(scope="session")
def table11():
    return read_table("table11_grey.csv")


# one summary line per acceptance criterion
_criteria = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None or rep.when not in ("setup", "call"):
        return
    key = marker.args[0]
    title = marker.args[1]
    ok = rep.passed
    prev = _criteria.get(key, (title, True))
    if rep.when == "call" or not ok:
        _criteria[key] = (title, prev[1] and ok)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(_criteria):
        title, ok = _criteria[key]
        terminalreporter.write_line(f"AC{key:<2} {'PASS' if ok else 'FAIL'}  {title}")
