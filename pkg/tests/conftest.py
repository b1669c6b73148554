from __future__ import annotations

import random
from fractions import Fraction

import pytest
from hypothesis import strategies as st

from geocycles.generators import random_connected_graph
from geocycles.graph import Graph


def unit_k4() -> Graph:
    return Graph.from_tuples(
        [("ab", "a", "b", 1), ("bc", "b", "c", 1), ("cd", "c", "d", 1),
         ("da", "d", "a", 1), ("ac", "a", "c", 1), ("bd", "b", "d", 1)]
    )


@pytest.fixture
def k4() -> Graph:
    return unit_k4()


@st.composite
def small_graphs(draw, max_vertices: int = 7, max_extra: int = 4, unit: bool = False) -> Graph:
    n = draw(st.integers(1, max_vertices))
    extra = draw(st.integers(0, max_extra))
    seed = draw(st.integers(0, 2**32 - 1))
    return random_connected_graph(random.Random(seed), n, extra, unit=unit)


lengths = st.fractions(min_value=Fraction(1, 16), max_value=16, max_denominator=16).filter(lambda x: x > 0)


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
