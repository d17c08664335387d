import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from raagstab.graph import cycle_graph, parse_graph, path_graph  # noqa: E402

RESULTS: dict[str, str] = {}


@pytest.fixture(scope="session")
def c5():
    return cycle_graph(5)


@pytest.fixture(scope="session")
def p4():
    return path_graph(["p", "q", "r", "s"])


@pytest.fixture(scope="session")
def edge():
    return parse_graph("vertex x\nvertex y\nedge x y\n")


def pytest_terminal_summary(terminalreporter):
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for key in sorted(RESULTS, key=lambda k: int(k.split()[1])):
            terminalreporter.write_line(RESULTS[key])
