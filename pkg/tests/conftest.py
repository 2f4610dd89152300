from itertools import combinations

import pytest
from hypothesis import settings, strategies as st

from hamwheel.graph import Graph

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


@st.composite
def graphs(draw, min_n=0, max_n=9, p=None):
    n = draw(st.integers(min_n, max_n))
    pairs = list(combinations(range(n), 2))
    if p is None:
        keep = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    else:
        keep = [draw(st.floats(0, 1)) < p for _ in pairs]
    return Graph.from_edges(n, [e for e, k in zip(pairs, keep) if k])


@st.composite
def graph_and_subset(draw, min_n=1, max_n=9):
    g = draw(graphs(min_n=min_n, max_n=max_n))
    mask = draw(st.integers(0, (1 << g.n) - 1))
    return g, mask


def to_nx(g: Graph):
    import networkx as nx

    h = nx.Graph()
    h.add_nodes_from(range(g.n))
    h.add_edges_from(g.edges())
    return h


@pytest.fixture
def nx_of():
    return to_nx
