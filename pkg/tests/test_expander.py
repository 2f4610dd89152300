import math
import random
from collections import deque
from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import given, settings, strategies as st

from hamwheel.errors import BallNotFound, ExtractionFailed, PathNotFound
from hamwheel.expander import (
    EXHAUSTIVE,
    ExpanderParams,
    Probed,
    ball_radius,
    eps,
    extract_expander,
    find_ball_avoiding,
    peel_min_degree,
    short_path_avoiding,
    verify_expander,
    violation_of,
)
from hamwheel.generators import clique_star, complete, cycle, path, random_regular, two_cliques_bridge
from hamwheel.graph import Graph

from conftest import graphs


def naive_eps(x, e1, k):
    return 0.0 if x < k / 5 else e1 / math.log(15 * x / k) ** 2


def naive_violations(g, e1, k):
    out = []
    for size in range(math.ceil(k / 2), g.n // 2 + 1):
        for xs in combinations(range(g.n), size):
            nb = set()
            for v in xs:
                nb.update(w for w in range(g.n) if g.has_edge(v, w))
            nb -= set(xs)
            if len(nb) < naive_eps(size, e1, k) * size:
                out.append(xs)
    return out


def test_eps_examples():
    assert eps(2, 0.5, 15) == 0
    assert eps(15, 0.5, 15) == pytest.approx(0.5 / math.log(15) ** 2)
    assert round(eps(15, 0.5, 15), 5) == 0.06818
    assert eps(3, 0.5, 15) == pytest.approx(0.5 / math.log(3) ** 2)


@given(st.floats(0.01, 1), st.integers(1, 40))
def test_eps_monotone_on_grid(e1, k):
    xs = [k / 5 + i * k / 17 for i in range(60)]
    vals = [eps(x, e1, k) for x in xs]
    assert all(a >= b for a, b in zip(vals, vals[1:]))
    assert all(eps(x, e1, k) == 0 for x in (0, k / 5 * 0.99))


@settings(max_examples=60)
@given(graphs(min_n=2, max_n=12), st.sampled_from([0.5, 1.0, 2.0, 4.0]), st.integers(1, 8))
def test_exhaustive_matches_naive(g, e1, k):
    cert = verify_expander(g, ExpanderParams(eps1=e1, k=k), EXHAUSTIVE)
    bad = naive_violations(g, e1, k)
    assert cert.certified == (not bad)
    if bad:
        assert violation_of(g, cert.violating.bits, ExpanderParams(eps1=e1, k=k))


def test_params_validation():
    p = ExpanderParams.standard()
    p.validate()
    assert p.delta < 1
    with pytest.raises(ValueError):
        ExpanderParams(eps1=0.5, k=15).validate()


def test_vacuous_window():
    cert = verify_expander(complete(8), ExpanderParams(eps1=0.1, k=15))
    assert cert.certified and cert.checked == 0


def test_two_cliques_bridge_violation():
    g = two_cliques_bridge(8)
    p = ExpanderParams(eps1=2, k=4)
    cert = verify_expander(g, p)
    assert not cert.certified
    side = set(range(8))
    assert set(cert.violating.sorted()) <= side
    assert violation_of(g, 0xFF, p)
    assert bin(g.neighborhood(0xFF)).count("1") == 1


def test_cycle_arc_violation_probed():
    g = cycle(40)
    p = ExpanderParams(eps1=2, k=4)
    arc = (1 << 20) - 1
    assert violation_of(g, arc, p)
    cert = verify_expander(g, p, Probed(probes=32, seed=0))
    assert cert.level == "probed" and not cert.certified
    assert violation_of(g, cert.violating.bits, p)


def test_cycle_with_eps1_09_has_no_violating_arc():
    # arcs minimise the boundary of a cycle, and eps(20)*20 < 2 here
    p = ExpanderParams(eps1=0.9, k=4)
    assert eps(20, 0.9, 4) * 20 < 2
    g = cycle(40)
    for size in range(2, 21):
        assert not violation_of(g, (1 << size) - 1, p)


def test_peel_examples():
    g = Graph.from_edges(6, list(combinations(range(5), 2)) + [(4, 5)])
    assert peel_min_degree(g, 2) == complete(5)
    assert peel_min_degree(path(7), 2).n == 0
    assert peel_min_degree(cycle(6), 2) == cycle(6)


def _check_extraction(g, res, p):
    h = res.graph
    assert h == g.induced(res.vertices.bits)
    assert res.avg_degree == h.avg_degree()
    assert res.avg_degree >= (1 - Fraction(p.delta)) * g.avg_degree()
    assert 2 * h.min_degree() >= h.avg_degree()
    assert res.certificate.certified


def test_extract_from_k16_is_k16():
    g = complete(16)
    res = extract_expander(g)
    assert res.vertices.sorted() == list(range(16))
    assert res.certificate.level == "exhaustive"
    _check_extraction(g, res, ExpanderParams.standard())


def test_extract_two_k10_sharing_vertex():
    g = clique_star(9, 2)
    p = ExpanderParams(eps1=2, k=4)
    res = extract_expander(g, p, strict=False)
    assert res.vertices.sorted() in ([0] + list(range(1, 10)), [0] + list(range(10, 19)))
    assert res.graph == complete(10)
    _check_extraction(g, res, p)
    # under the standard constants the cut vertex still gives |N(X)| = 1 >= eps(x) x
    res = extract_expander(g)
    assert res.vertices.sorted() == list(range(19))
    _check_extraction(g, res, ExpanderParams.standard())


def test_extract_random_regular_probed():
    g = random_regular(200, 8, 1)
    p = ExpanderParams.standard()
    res = extract_expander(g, p)
    assert res.certificate.level == "probed"
    _check_extraction(g, res, p)


def test_extract_strict_rejects_out_of_range_params():
    with pytest.raises(ValueError):
        extract_expander(complete(6), ExpanderParams(eps1=2, k=4))


def test_extraction_failure_is_explicit():
    g = two_cliques_bridge(8)
    with pytest.raises(ExtractionFailed) as info:
        extract_expander(g, ExpanderParams(eps1=2, k=4), max_iterations=1, strict=False)
    assert info.value.violating is not None
    assert info.value.best.sorted() in (list(range(8)), list(range(8, 16)))


def _bfs_depths(g, src, allowed):
    dist = {src: 0}
    q = deque([src])
    while q:
        u = q.popleft()
        for w in g.neighbors(u):
            if w in allowed and w not in dist:
                dist[w] = dist[u] + 1
                q.append(w)
    return dist


def _check_ball(g, w, center, ball, size, radius):
    verts = set(ball.sorted())
    assert len(verts) == size and center in verts
    assert not verts & set(w)
    dist = _bfs_depths(g, center, verts)
    assert set(dist) == verts
    assert max(dist.values()) <= radius
    assert ball_radius(g, center, ball) == max(dist.values())


def test_ball_on_path():
    g = path(100)
    c, ball = find_ball_avoiding(g, [], 21, 10)
    assert c == 10
    assert ball.sorted() == list(range(21))
    _check_ball(g, [], c, ball, 21, 10)


def test_ball_in_clique_with_w():
    g = complete(20)
    w = [0, 1, 2, 3, 4]
    c, ball = find_ball_avoiding(g, w, 10, 1)
    assert c == 5
    _check_ball(g, w, c, ball, 10, 1)


def test_ball_in_random_regular():
    g = random_regular(500, 4, 0)
    rng = random.Random(3)
    w = rng.sample(range(500), 10)
    e1 = ExpanderParams.standard().eps1
    cap = math.ceil(20 / e1 * math.log(500) ** 3)
    c, ball = find_ball_avoiding(g, w, 50, cap)
    _check_ball(g, w, c, ball, 50, cap)


def test_ball_not_found():
    with pytest.raises(BallNotFound):
        find_ball_avoiding(path(10), [], 8, 2)


def _bfs_distance(g, x1, x2, w):
    blocked = set(w) - set(x1) - set(x2)
    best = None
    for s in x1:
        dist = {s: 0}
        q = deque([s])
        while q:
            u = q.popleft()
            for v in g.neighbors(u):
                if v in dist or v in blocked:
                    continue
                dist[v] = dist[u] + 1
                if v not in x2 and v not in x1:
                    q.append(v)
        for t in x2:
            if t in dist and (best is None or dist[t] < best):
                best = dist[t]
    return best


def _check_path(g, p, x1, x2, w):
    assert len(set(p)) == len(p)
    assert all(g.has_edge(a, b) for a, b in zip(p, p[1:]))
    assert p[0] in x1 and p[-1] in x2
    assert not set(p[1:-1]) & (set(w) | set(x1) | set(x2))


def test_short_path_examples():
    p = short_path_avoiding(complete(9), [0, 1], [5, 6], [])
    assert len(p) == 2
    p = short_path_avoiding(cycle(10), [0], [5], [1, 2, 3, 4])
    assert p == [0, 9, 8, 7, 6, 5]


def test_short_path_not_found_semantics():
    with pytest.raises(PathNotFound) as info:
        short_path_avoiding(cycle(10), [0], [5], [1, 2, 3, 4], length_cap=4)
    assert info.value.distance == 5
    with pytest.raises(PathNotFound) as info:
        short_path_avoiding(cycle(10), [0], [5], [1, 9])
    assert info.value.distance is None


@settings(max_examples=60)
@given(graphs(min_n=4, max_n=12), st.data())
def test_short_path_is_minimal(g, data):
    verts = list(range(g.n))
    x1 = data.draw(st.sets(st.sampled_from(verts), min_size=1, max_size=3))
    x2 = data.draw(st.sets(st.sampled_from([v for v in verts if v not in x1] or [None]), min_size=1, max_size=3))
    if None in x2:
        return
    w = data.draw(st.sets(st.sampled_from([v for v in verts if v not in x1 | x2] or verts), max_size=3)) - x1 - x2
    expect = _bfs_distance(g, x1, x2, w)
    if expect is None:
        with pytest.raises(PathNotFound):
            short_path_avoiding(g, x1, x2, w)
        return
    p = short_path_avoiding(g, x1, x2, w)
    _check_path(g, p, x1, x2, w)
    assert len(p) - 1 == expect


def test_short_path_in_extracted_expander():
    g = random_regular(200, 8, 1)
    p = ExpanderParams.standard()
    res = extract_expander(g, p)
    h = res.graph
    rng = random.Random(1)
    verts = list(range(h.n))
    cap = math.ceil(2 / p.eps1 * math.log(h.n) ** 3)
    for _ in range(20):
        pick = rng.sample(verts, 20)
        x1, x2 = pick[:10], pick[10:]
        w = []
        path_ = short_path_avoiding(h, x1, x2, w, length_cap=cap)
        _check_path(h, path_, set(x1), set(x2), w)
        assert len(path_) - 1 <= cap
