"""Shared fixtures-by-function and independent oracles (networkx)."""
import math

import networkx as nx

from hopsparse import GeneratorSpec, generate_graph


def gnp(n, seed, wmax=8, directed=True, density=0.1):
    return generate_graph(GeneratorSpec("gnp", n, density, (1, wmax), seed=seed, directed=directed))


def to_nx(g):
    G = nx.DiGraph() if g.directed else nx.Graph()
    G.add_nodes_from(range(g.n))
    for u, v, w in g.edges():
        G.add_edge(u, v, weight=w)
    return G


def nx_apsp(g):
    """dict-of-dicts exact distances (missing key = unreachable)."""
    return dict(nx.all_pairs_dijkstra_path_length(to_nx(g), weight="weight"))


def brute_hop_bounded(n, rows, directed, source, R):
    """Layered relaxation written from the definition (independent of the package)."""
    d = [math.inf] * n
    d[source] = 0
    arcs = list(rows) + ([] if directed else [(v, u, w) for u, v, w in rows])
    for _ in range(R):
        nd = d[:]
        for u, v, w in arcs:
            if d[u] + w < nd[v]:
                nd[v] = d[u] + w
        d = nd
    return d
