import sys
from functools import lru_cache
from importlib import resources

import pytest
from hypothesis import strategies as st

from kasteleyn_action import parse_graph
from kasteleyn_action.fuzz import random_graph

SMALL = ["k3", "c4", "theta", "k4", "tri2"]
ALL = SMALL + ["w5", "grid3x3", "cube", "w7"]


@lru_cache(maxsize=None)
def builtin(name: str):
    return parse_graph((resources.files("kasteleyn_action") / "graphs" / f"{name}.json").read_text())


@pytest.fixture(params=SMALL)
def small_graph(request):
    return builtin(request.param)


@pytest.fixture
def k3():
    return builtin("k3")


@pytest.fixture
def c4():
    return builtin("c4")


@pytest.fixture
def theta():
    return builtin("theta")


def fuzzed(max_edges: int = 8):
    return st.integers(0, 10**6).map(lambda s: random_graph(s, 0, max_edges))


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.summary_lines():
        terminalreporter.write_line(line)
