import pytest
from hypothesis import strategies as st

from hajos.digraph import Digraph


def directed_triangle(offset=0):
    a, b, c = offset, offset + 1, offset + 2
    return Digraph([a, b, c], [(a, b), (b, c), (c, a)])


@st.composite
def digraphs(draw, max_order=8, min_order=1):
    n = draw(st.integers(min_order, max_order))
    labels = draw(st.lists(st.integers(0, 40), min_size=n, max_size=n, unique=True))
    pairs = [(u, v) for u in labels for v in labels if u != v]
    arcs = draw(st.lists(st.sampled_from(pairs), max_size=3 * n)) if pairs else []
    return Digraph(labels, arcs)


@pytest.fixture
def triangle():
    return directed_triangle()
