import pytest
from hypothesis import given, strategies as st

from hamwheel.errors import GraphError
from hamwheel.generators import (
    FAMILIES,
    clique_star,
    complete,
    complete_minus_matching,
    complete_minus_max_matching,
    gnp,
    generate,
    hypercube,
    petersen,
    random_regular,
    two_cliques_bridge,
)


def test_clique_star_small():
    g = clique_star(3, 2)
    assert (g.n, g.m) == (7, 12)
    assert g.degree(0) == 6


@given(st.integers(1, 6), st.integers(1, 5))
def test_clique_star_counts(d, c):
    g = clique_star(d, c)
    assert g.n == c * d + 1
    assert g.m == c * (d + 1) * d // 2


def test_complete_minus_matching_regular():
    g = complete_minus_matching(6)
    assert g.is_regular() and g.degree(0) == 4 and g.m == 12


def test_complete_minus_matching_odd_raises():
    with pytest.raises(GraphError):
        complete_minus_matching(5)


def test_complete_minus_max_matching_odd():
    g = complete_minus_max_matching(5)
    assert g.m == 10 - 2
    assert sorted(g.degrees) == [3, 3, 3, 3, 4]


def test_hypercube_and_petersen():
    q3 = hypercube(3)
    assert (q3.n, q3.m) == (8, 12) and q3.is_regular()
    p = petersen()
    assert (p.n, p.m) == (10, 15) and p.is_regular() and p.degree(0) == 3


def test_two_cliques_bridge():
    g = two_cliques_bridge(8)
    assert (g.n, g.m) == (16, 2 * 28 + 1)
    assert g.has_edge(7, 8)


def test_random_regular_odd_degree_sum_raises():
    with pytest.raises(GraphError):
        random_regular(7, 3)


@given(st.integers(4, 40), st.integers(1, 5), st.integers(0, 10 ** 6))
def test_random_regular_is_regular(n, d, seed):
    if d >= n or (n * d) % 2:
        return
    g = random_regular(n, d, seed)
    assert g.n == n and all(x == d for x in g.degrees)


def test_random_regular_deterministic():
    assert random_regular(200, 8, 1) == random_regular(200, 8, 1)
    assert gnp(30, 0.3, 4) == gnp(30, 0.3, 4)


def test_generate_parses_specs():
    assert generate("complete:4") == complete(4)
    assert generate("random_regular:20,3", seed=2) == random_regular(20, 3, 2)
    with pytest.raises(GraphError):
        generate("nonsense:3")
    assert "petersen" in FAMILIES
