import json
from pathlib import Path

import pytest

from mdsquiver.presentation import build_presentation, load_document
from mdsquiver.quiver import build_quiver

ROOT = Path(__file__).resolve().parents[1]
FIXTURES = ROOT / "fixtures"


def reference(name):
    with open(FIXTURES / "reference" / f"{name}.json", encoding="utf-8") as fh:
        return json.load(fh)


@pytest.fixture(scope="session")
def gr24():
    return load_document(FIXTURES / "gr24.json")


@pytest.fixture(scope="session")
def x4():
    return load_document(FIXTURES / "x4.json")


@pytest.fixture(scope="session")
def x5():
    return load_document(FIXTURES / "x5.json")


@pytest.fixture(scope="session")
def gr24_quiver(gr24):
    return build_quiver(gr24.presentation, gr24.collection)


@pytest.fixture(scope="session")
def x4_quiver(x4):
    return build_quiver(x4.presentation, x4.collection)


@pytest.fixture(scope="session")
def x5_quiver(x5):
    return build_quiver(x5.presentation, x5.collection)


@pytest.fixture(scope="session")
def p2():
    return build_presentation(["x0", "x1", "x2"], [[1, 1, 1]], [], [1])


def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for n in sorted(lines):
            terminalreporter.write_line(lines[n])
