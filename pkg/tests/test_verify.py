import inspect
import json
import math
from fractions import Fraction

import numpy as np
import pytest

from hopsparse import (BASE_TCW, EXACT, GeneratorSpec, Graph, Hopset, base_tcw, custom_schedule,
                       density_net, folklore_exact_hopset, generate_graph, greedy_spanner,
                       hopsets_to_missing_spanner, level_hopset, shortcut_folklore, verify)
from hopsparse.verify import (AllPairs, Pairs, Slack, Sourcewise, VerificationReport,
                              brute_force_girth, check_density_net, check_hopset,
                              check_missing_spanner, check_shortcut, check_stretch,
                              oracle_hop_bounded)
from helpers import brute_hop_bounded, gnp


def test_checkers_share_no_construction_code():
    src = inspect.getsource(verify)
    for mod in ("paths", "kernels", "missing", "derived", "schedule"):
        assert f".{mod} import" not in src and f"from .{mod}" not in src


def test_min_plus_oracle_against_definition():
    g = gnp(24, 2)
    for beta in (1, 3, 7):
        table = oracle_hop_bounded(g.n, g.edges(), True, beta)
        for s in (0, 11):
            assert table[s].tolist() == [float(x) for x in brute_hop_bounded(g.n, g.edges(), True, s, beta)]


def test_hopset_examples():
    g = generate_graph(GeneratorSpec("gnp", 40, 0.2, (1, 5), seed=1, directed=False))
    assert check_hopset(g, Hopset({}, 39), 39, EXACT).passed
    assert check_hopset(g, base_tcw(g), 1, EXACT).passed
    h = folklore_exact_hopset(gnp(64, 3), 8, 3)
    assert check_hopset(gnp(64, 3), h, 24, EXACT).passed


def test_hopset_underweight_edge_caught():
    g = generate_graph(GeneratorSpec("path", 5))
    rep = check_hopset(g, Hopset({(0, 4): 1}, 1), 4, EXACT)
    assert not rep.passed and "below" in rep.counterexample["why"]


def test_hopset_multiplicative_bound_exact_rational():
    g = Graph(3, [(0, 1, 2), (1, 2, 2)])
    h = Hopset({(0, 2): 5}, 1)
    from hopsparse import multiplicative
    assert check_hopset(g, h, 1, multiplicative(Fraction(1, 4))).passed        # 5 <= 5/4 * 4
    assert not check_hopset(g, h, 1, multiplicative(Fraction(1, 5))).passed    # 5 > 6/5 * 4


def test_missing_spanner_examples_and_tamper():
    g = gnp(20, 1)
    assert check_missing_spanner(g, hopsets_to_missing_spanner(g, [], custom_schedule(20, []))).passed
    assert check_missing_spanner(g, hopsets_to_missing_spanner(g, [base_tcw(g)], custom_schedule(20, [1]))).passed
    path = generate_graph(GeneratorSpec("path", 24))
    ms = hopsets_to_missing_spanner(path, [level_hopset(path, BASE_TCW, 3, EXACT, 0)], custom_schedule(24, [3]))
    assert check_missing_spanner(path, ms).passed
    # strip r + 1 consecutive G' edges: the pair spanning them then exceeds the budget
    import dataclasses
    cut = {(i, i + 1) for i in range(ms.r + 1)}
    assert cut <= ms.g_prime
    bad = dataclasses.replace(ms, g_prime=ms.g_prime - cut, _top=None, _searches={}, _expanded={})
    rep = check_missing_spanner(path, bad)
    assert not rep.passed and rep.counterexample["why"] == "too many missing edges"


def test_missing_spanner_foreign_edge():
    g = gnp(16, 2)
    ms = hopsets_to_missing_spanner(g, [], custom_schedule(16, []))
    import dataclasses
    ms = dataclasses.replace(ms, g_prime={(0, 0)})
    assert not check_missing_spanner(g, ms).passed


def test_stretch_examples():
    g = gnp(64, 4, directed=False, density=0.15)
    assert check_stretch(g, g.edges(), AllPairs(), alpha=1).passed
    keys = greedy_spanner(g, 2)
    rows = [(u, v, g.weight(u, v)) for u, v in keys]
    assert check_stretch(g, rows, AllPairs(), alpha=3).passed


def test_stretch_additive_and_scopes():
    cyc = generate_graph(GeneratorSpec("cycle", 10, directed=False))
    cut = cyc.edges()[1:]                        # drops (0, 1): that pair now at distance 9
    assert not check_stretch(cyc, cut, AllPairs(), alpha=1, beta_add=7).passed
    assert check_stretch(cyc, cut, AllPairs(), alpha=1, beta_add=8).passed
    assert check_stretch(cyc, cut, Pairs(((2, 5),)), alpha=1).passed
    assert not check_stretch(cyc, cut, Sourcewise((0,)), alpha=1).passed


def test_slack_ranking_excludes_nearest():
    # path 0..8, vertex 9 hangs off 8 (weight 1) and off 0 (weight 5); dropping (0, 9)
    # only hurts pairs where 9 is in the nearer half of the ranking
    rows = [(i, i + 1, 1) for i in range(8)] + [(8, 9, 1), (0, 9, 5)]
    g = Graph(10, rows, directed=False)
    sub = rows[:-1]
    assert not check_stretch(g, sub, Slack(0.0), alpha=1).passed
    assert not check_stretch(g, sub, Slack(0.5), alpha=1).passed
    assert check_stretch(g, sub, Slack(0.9), alpha=1).passed


def test_shortcut_examples():
    dag = generate_graph(GeneratorSpec("random-dag", 30, 0.2, seed=3))
    assert check_shortcut(dag, base_tcw(dag), 1).passed
    path = generate_graph(GeneratorSpec("path", 12))
    assert check_shortcut(path, Hopset({}, 11), 11).passed
    rep = check_shortcut(path, Hopset({}, 10), 10)
    assert not rep.passed and rep.counterexample["observed"] == 11
    big = generate_graph(GeneratorSpec("random-dag", 128, 0.05, seed=4, window=16))
    assert check_shortcut(big, shortcut_folklore(big, 8, 4), 24).passed


def test_density_net_checker_detects_bad_net():
    g = gnp(40, 5, directed=False, density=0.15)
    dn = density_net(g, 0.25)
    assert check_density_net(g, dn).passed
    import dataclasses
    assert not check_density_net(g, dataclasses.replace(dn, net=[])).passed
    assert not check_density_net(g, dataclasses.replace(dn, net=list(range(g.n)))).passed


def test_girth_oracle():
    assert brute_force_girth(3, [(0, 1), (1, 2), (0, 2)]) == 3
    assert brute_force_girth(4, [(0, 1), (1, 2), (2, 3)]) == math.inf
    assert brute_force_girth(5, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]) == 5


def test_report_contract_and_serialization():
    g = gnp(30, 6)
    rep = check_hopset(g, base_tcw(g), 1, EXACT)
    assert rep.passed == (rep.counterexample is None)
    assert rep.pairs_checked > 0 and rep.worst_stretch is not None
    doc = json.loads(rep.to_json())
    assert doc["passed"] and doc["prop"].startswith("hopset")
    assert rep.to_text().startswith("PASS")
    bad = check_hopset(g, Hopset({}, 1), 1, EXACT)
    assert not bad.passed and bad.counterexample and bad.to_text().startswith("FAIL")


def test_report_merge_associative():
    a = VerificationReport("x", True, 3, worst_stretch=1.5)
    b = VerificationReport("x", False, 2, worst_hops=4, counterexample={"u": 1})
    c = VerificationReport("x", True, 1, worst_missing=2)
    left, right = a.merge(b).merge(c), a.merge(b.merge(c))
    assert left == right and not left.passed and left.pairs_checked == 6


def test_sampling_above_cap():
    g = generate_graph(GeneratorSpec("random-dag", 300, 0.03, seed=1))
    rep = check_hopset(g, base_tcw(g), 1, EXACT)
    assert rep.passed and "sampled" in rep.note
