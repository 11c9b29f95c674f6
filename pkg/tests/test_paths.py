import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hopsparse import GeneratorSpec, Graph, GraphError, apsp_exact, apsp_hop_bounded, generate_graph, \
    greedy_spanner, min_hops
from hopsparse.kernels import INF
from hopsparse.verify import brute_force_girth, check_stretch, AllPairs
from helpers import brute_hop_bounded, gnp, nx_apsp

PATH4 = generate_graph(GeneratorSpec("path", 4, directed=False))


def test_apsp_exact_path_and_disconnected():
    d = apsp_exact(PATH4)
    assert d[0, 3] == 3
    assert apsp_exact(Graph(2))[0, 1] == INF


def test_apsp_exact_agrees_with_full_hop_budget():
    g = gnp(32, 4)
    full = apsp_hop_bounded(g, None, g.n - 1).table()
    assert np.array_equal(full, apsp_exact(g))


def test_hop_bounded_examples():
    hb = apsp_hop_bounded(PATH4, None, 2)
    assert hb.dist(0, 3) == math.inf
    hb3 = apsp_hop_bounded(PATH4, None, 3)
    assert hb3.dist(0, 3) == 3 and hb3.path(0, 3) == [0, 1, 2, 3]


def test_hop_bounded_with_extra_edge():
    hb = apsp_hop_bounded(PATH4, {(0, 2): 2}, 2)
    assert hb.dist(0, 3) == 3 and hb.path(0, 3) == [0, 2, 3]


def test_hop_budget_must_be_positive():
    with pytest.raises(GraphError):
        apsp_hop_bounded(PATH4, None, 0)


def test_prefers_fewer_hops_at_equal_length():
    g = Graph(3, [(0, 1, 1), (1, 2, 1), (0, 2, 2)])
    assert apsp_hop_bounded(g, None, 2).path(0, 2) == [0, 2]


def test_min_hops_examples():
    g = Graph(3, [(0, 1, 1), (1, 2, 1), (0, 2, 2)], directed=False)
    assert min_hops(g, 0, 2) == 1
    p5 = generate_graph(GeneratorSpec("path", 6))
    assert min_hops(p5, 0, 5) == 5
    assert min_hops(p5, 5, 0) == math.inf


def test_min_hops_matches_sweep():
    g = gnp(32, 9)
    exact = apsp_exact(g)
    tables = {R: apsp_hop_bounded(g, None, R).table() for R in range(1, g.n)}
    for u in range(0, g.n, 5):
        for v in range(g.n):
            if u == v or exact[u, v] >= INF:
                continue
            first = min(R for R in tables if tables[R][u, v] == exact[u, v])
            assert min_hops(g, u, v) == first


def test_greedy_triangle_k1_and_c4_k2():
    tri = Graph(3, [(0, 1, 1), (1, 2, 1), (0, 2, 1)], directed=False)
    assert len(greedy_spanner(tri, 1)) == 3
    c4 = generate_graph(GeneratorSpec("cycle", 4, directed=False))
    assert greedy_spanner(c4, 2) == {(0, 1), (0, 3), (1, 2)}


def test_greedy_gnp64_k2():
    g = gnp(64, 1, directed=False, density=0.2)
    keys = greedy_spanner(g, 2)
    assert check_stretch(g, [(u, v, g.weight(u, v)) for u, v in keys], AllPairs(), alpha=3).passed
    assert brute_force_girth(g.n, keys) > 4


def test_greedy_rejects_directed():
    with pytest.raises(GraphError):
        greedy_spanner(gnp(8, 0), 2)


@settings(max_examples=30, deadline=None)
@given(st.integers(2, 10), st.lists(st.tuples(st.integers(0, 9), st.integers(0, 9), st.integers(0, 9)),
                                    max_size=30), st.booleans(), st.integers(1, 10))
def test_hop_bounded_matches_definition(n, rows, directed, R):
    rows = [(u % n, v % n, w) for u, v, w in rows]
    g = Graph(n, rows, directed=directed)
    hb = apsp_hop_bounded(g, None, R)
    for s in range(n):
        ref = brute_hop_bounded(n, g.edges(), directed, s, R)
        for v in range(n):
            assert hb.dist(s, v) == ref[v]
            p = hb.path(s, v)
            if ref[v] < math.inf:
                assert p[0] == s and p[-1] == v and len(p) - 1 <= R
                assert sum(g.weight(a, b) for a, b in zip(p, p[1:])) == ref[v]
            # monotone in R
            assert hb.dist(s, v, max(1, R - 1)) >= hb.dist(s, v)
