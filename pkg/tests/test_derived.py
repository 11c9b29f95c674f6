import math
from fractions import Fraction

import numpy as np
import pytest

from hopsparse import (BASE_TCW, EXACT, ConstructionError, GeneratorSpec, Graph, GraphError, Hopset,
                       PairSet, SubgraphResult, custom_schedule, density_net,
                       directed_preserver_pipeline, emulator_from_hopset, folklore_exact_hopset,
                       generate_graph, greedy_spanner, hopsets_to_missing_spanner, level_hopset,
                       nearest_source_tree, partition_sources, preserver_from_missing,
                       reachability_preserver_pipeline, slack_spanner, sourcewise_spanner,
                       sourcewise_spanner_partitioned, spanner_from_emulator,
                       undirected_preserver_pipeline, weighted_near_additive_spanner)
from hopsparse.derived import C_WEIGHTED, with_retries
from hopsparse.graph import sample_pairs
from hopsparse.verify import (AllPairs, Pairs, Slack, Sourcewise, check_density_net,
                              check_stretch, oracle_distances)
from helpers import gnp, nx_apsp


def two_level_ms(g, seed=0):
    sched = custom_schedule(g.n, [16, 4])
    hier = [level_hopset(g, BASE_TCW, b, EXACT, seed + i) for i, b in enumerate(sched.betas, 1)]
    return hopsets_to_missing_spanner(g, hier, sched)


# -- preservers ------------------------------------------------------------------

def test_preserver_empty_pairs_is_g_prime():
    g = gnp(64, 1)
    ms = two_level_ms(g, 1)
    assert set(preserver_from_missing(ms, []).edges) == ms.g_prime


def test_preserver_gnp64_ten_pairs():
    g = gnp(64, 2)
    ms = two_level_ms(g, 2)
    pairs = sample_pairs(g, 10, 2)
    res = preserver_from_missing(ms, pairs)
    assert len(res) <= len(ms.g_prime) + 10 * ms.r
    assert set(res.edges) <= g.edge_keys()
    assert check_stretch(g, res, Pairs(pairs.pairs), alpha=ms.t).passed


def test_preserver_skips_unreachable():
    g = generate_graph(GeneratorSpec("path", 10))
    res = directed_preserver_pipeline(g, [(0, 5), (5, 0)])
    assert res.skipped == [(5, 0)]
    assert check_stretch(g, res, Pairs(((0, 5),)), alpha=1).passed


def test_pipeline_single_pair_exact():
    g = gnp(64, 3)
    pairs = sample_pairs(g, 1, 3)
    res = directed_preserver_pipeline(g, pairs, seed=3)
    assert res.alpha == 1
    assert check_stretch(g, res, Pairs(pairs.pairs), alpha=1).passed


def test_pipeline_random_dag_256():
    g = generate_graph(GeneratorSpec("random-dag", 256, 0.05, (1, 8), seed=1, window=32))
    pairs = sample_pairs(g, 16, 1)
    res = directed_preserver_pipeline(g, pairs, seed=1)
    rep = check_stretch(g, res, Pairs(pairs.pairs), alpha=1)
    assert rep.passed and rep.pairs_checked == 16
    assert len(res) <= res.provenance["g_prime"] + 16 * res.provenance["r"]


def test_pipeline_multiplicative():
    g = gnp(64, 4)
    pairs = sample_pairs(g, 12, 4)
    res = directed_preserver_pipeline(g, pairs, eps=Fraction(1, 2), seed=4)
    assert res.alpha <= Fraction(3, 2)
    assert check_stretch(g, res, Pairs(pairs.pairs), alpha=Fraction(3, 2)).passed


def test_reachability_pipeline():
    g = generate_graph(GeneratorSpec("random-dag", 128, 0.04, seed=5, window=20))
    pairs = sample_pairs(g, 16, 5)
    res = reachability_preserver_pipeline(g, pairs, seed=5)
    assert res.kind == "reachability-preserver" and res.alpha is None
    assert check_stretch(g, res, Pairs(pairs.pairs)).passed
    with pytest.raises(GraphError):
        reachability_preserver_pipeline(gnp(8, 0, directed=False), [])


def test_reachability_pairs_on_edges():
    g = generate_graph(GeneratorSpec("random-dag", 40, 0.1, seed=6))
    pairs = [(u, v) for u, v, _ in g.edges()[:5]]
    res = reachability_preserver_pipeline(g, pairs, seed=6)
    assert check_stretch(g, res, Pairs(tuple(pairs))).passed


def test_with_retries_reseeds():
    seen = []

    def build(s):
        seen.append(s)
        if len(seen) < 3:
            raise ConstructionError("claim failed")
        return s

    assert with_retries(build, 10) == seen[-1] and len(set(seen)) == 3
    with pytest.raises(ConstructionError):
        with_retries(lambda s: (_ for _ in ()).throw(ConstructionError("always")), 0)


def test_undirected_preserver_examples():
    path = generate_graph(GeneratorSpec("path", 20, directed=False))
    res = undirected_preserver_pipeline(path, [(2, 15)])
    assert {(i, i + 1) for i in range(2, 15)} <= set(res.edges)
    g = gnp(64, 7, directed=False)
    empty = undirected_preserver_pipeline(g, [], seed=7)
    assert empty.provenance["g_prime"] == len(empty)
    pairs = sample_pairs(g, 20, 7)
    eps = Fraction(1, 2)
    res = undirected_preserver_pipeline(g, pairs, eps=eps, seed=7)
    assert len(res) <= res.provenance["g_prime"] + 20 * res.provenance["r"]
    assert check_stretch(g, res, Pairs(pairs.pairs), alpha=1 + eps).passed


def test_subgraph_result_round_trip():
    g = gnp(30, 8)
    res = directed_preserver_pipeline(g, sample_pairs(g, 4, 8), seed=8)
    back = SubgraphResult.from_text(res.to_text())
    assert (back.edges, back.kind, back.alpha, back.beta_add) == (res.edges, res.kind, res.alpha, res.beta_add)
    assert back.to_text() == res.to_text()


# -- emulators and near-additive spanners ----------------------------------------

UNW = gnp(64, 11, wmax=1, directed=False)


def test_emulator_empty_hopset_is_spanner():
    h = Hopset({}, UNW.n - 1)
    em = emulator_from_hopset(UNW, h, 2)
    assert set(em.edges) == greedy_spanner(UNW, 2)
    assert check_stretch(UNW, em, AllPairs(), alpha=1, beta_add=3 * (UNW.n - 1)).passed


def test_emulator_k1_contains_graph():
    h = folklore_exact_hopset(UNW, 8, 1)
    em = emulator_from_hopset(UNW, h, 1)
    assert UNW.edge_keys() <= set(em.edges)
    assert check_stretch(UNW, em, AllPairs(), alpha=1, beta_add=h.beta).passed


def test_emulator_gnp64():
    h = folklore_exact_hopset(UNW, 8, 2)
    em = emulator_from_hopset(UNW, h, 2)
    assert len(em) <= len(h) + UNW.n ** 1.5
    assert check_stretch(UNW, em, AllPairs(), alpha=1, beta_add=3 * h.beta).passed


def test_emulator_rejects_weighted_or_directed():
    with pytest.raises(GraphError):
        emulator_from_hopset(gnp(16, 0, directed=False), Hopset({}, 1), 2)
    with pytest.raises(GraphError):
        emulator_from_hopset(gnp(16, 0, wmax=1), Hopset({}, 1), 2)


def test_spanner_from_emulator_examples():
    eps = Fraction(1, 4)
    sp = spanner_from_emulator(UNW, Hopset({}, 8), 2, eps)
    assert set(sp.edges) == greedy_spanner(UNW, 2)
    path = generate_graph(GeneratorSpec("path", 30, directed=False))
    sp_path = spanner_from_emulator(path, folklore_exact_hopset(path, 4, 0), 2, eps)
    assert set(sp_path.edges) <= path.edge_keys()
    h = folklore_exact_hopset(UNW, 8, 3)
    sp = spanner_from_emulator(UNW, h, 2, eps)
    assert set(sp.edges) <= UNW.edge_keys()
    assert check_stretch(UNW, sp, AllPairs(), alpha=1 + 2 * eps, beta_add=3 * h.beta).passed


def test_weighted_near_additive():
    unit = gnp(64, 12, wmax=1, directed=False)
    res = weighted_near_additive_spanner(unit, k=1)
    assert check_stretch(unit, res, AllPairs()).passed
    single = Graph(2, [(0, 1, 5)], directed=False)
    res1 = weighted_near_additive_spanner(single, k=1)
    assert set(res1.edges) == {(0, 1)}
    g = gnp(64, 13, directed=False)
    res = weighted_near_additive_spanner(g, k=1, eps=Fraction(1, 2))
    assert res.beta_add == C_WEIGHTED * res.provenance["r"] * 2 * g.w_max
    assert check_stretch(g, res, AllPairs()).passed
    with pytest.raises(GraphError):
        weighted_near_additive_spanner(gnp(16, 0))


# -- sourcewise ------------------------------------------------------------------

SW = gnp(64, 21, directed=False)


def test_sourcewise_single_source_is_exact():
    res = sourcewise_spanner(SW, [5], 2)
    assert check_stretch(SW, res, Sourcewise((5,)), alpha=1).passed


def test_sourcewise_all_sources_k1():
    eps = Fraction(1, 2)
    g = gnp(32, 22, directed=False, density=0.15)
    res = sourcewise_spanner(g, range(32), 1, eps)
    assert check_stretch(g, res, AllPairs(), alpha=3 * (1 + eps)).passed


def test_sourcewise_eight_sources_k2():
    eps = Fraction(1, 2)
    S = [1, 9, 17, 25, 33, 41, 49, 57]
    res = sourcewise_spanner(SW, S, 2, eps)
    assert check_stretch(SW, res, Sourcewise(tuple(S)), alpha=7 * (1 + eps)).passed
    with pytest.raises(GraphError):
        sourcewise_spanner(SW, [], 2)


def test_nearest_source_triangle_bound():
    S = [3, 30, 60]
    d = nx_apsp(SW)
    for u in range(SW.n):
        su = min(S, key=lambda s: (d[u].get(s, math.inf), s))
        for s in S:
            if s in d[u]:
                assert d[su][s] <= 2 * d[u][s]


def test_nearest_source_tree_spans():
    S = [0, 40]
    keys = nearest_source_tree(SW, S)
    sub = Graph(SW.n, [(u, v, SW.weight(u, v)) for u, v in keys], directed=False)
    ds = oracle_distances(SW.n, SW.edges(), False, S).min(axis=0)
    dt = oracle_distances(SW.n, sub.edges(), False, S).min(axis=0)
    assert np.array_equal(ds, dt)


def test_partition_contract_and_stretch():
    eps = Fraction(1, 2)
    S = list(range(0, 64, 3))
    parts = partition_sources(64, S, 2)
    assert sorted(x for p in parts for x in p) == S and all(len(p) <= 8 for p in parts)
    small = [1, 2, 3]
    a = sourcewise_spanner_partitioned(SW, small, 2, eps)
    b = sourcewise_spanner(SW, small, 1, eps)
    assert a.edges == b.edges
    g = gnp(36, 23, directed=False, density=0.15)
    res = sourcewise_spanner_partitioned(g, range(36), 2, eps)
    assert check_stretch(g, res, AllPairs(), alpha=3 * (1 + eps)).passed
    with pytest.raises(GraphError):
        sourcewise_spanner_partitioned(SW, S, 1)


# -- density nets and slack ------------------------------------------------------

def test_density_net_eps1_single_point():
    dn = density_net(SW, 1.0)
    assert len(dn) == 1
    ecc = oracle_distances(SW.n, SW.edges(), False).max(axis=1)
    c = dn.net[0]
    d = oracle_distances(SW.n, SW.edges(), False, [c])[0]
    assert all(d[x] <= 2 * ecc[x] for x in range(SW.n))


def test_density_net_clique():
    k = Graph(10, [(u, v, 1) for u in range(10) for v in range(u + 1, 10)], directed=False)
    dn = density_net(k, 0.5)
    assert len(dn) == 1 and set(dn.radius.tolist()) == {1}


@pytest.mark.parametrize("eps", [1 / 8, 1 / 4, 1 / 3])
def test_density_net_invariants(eps):
    dn = density_net(SW, eps)
    assert len(dn) <= math.ceil(1 / eps)
    assert check_density_net(SW, dn).passed


def test_density_net_domain():
    for eps in (0, -1, 1.5):
        with pytest.raises(GraphError):
            density_net(SW, eps)


def test_slack_examples():
    res = slack_spanner(SW, Fraction(99, 100), 2)
    assert res.provenance["net"] and len(res.provenance["net"]) == 1
    c = res.provenance["net"][0]
    assert check_stretch(SW, res, Sourcewise((c,)), alpha=1).passed
    k1 = slack_spanner(SW, Fraction(1, 8), 1, pres_eps=Fraction(1, 2))
    assert k1.alpha <= 5 + 6 * Fraction(3, 2)
    res = slack_spanner(SW, Fraction(1, 8), 2, pres_eps=Fraction(1, 2))
    assert check_stretch(SW, res, Slack(1 / 8), alpha=5 + 18 * Fraction(3, 2)).passed
    assert check_stretch(SW, res, Slack(1 / 8)).passed
