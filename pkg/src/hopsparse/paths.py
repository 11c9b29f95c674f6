"""Exact and hop-bounded shortest paths, minimal hop counts, greedy spanner."""
from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from .graph import Graph, GraphError
from .kernels import INF, dijkstra_many, hop_layered_sssp


class Overlay:
    """CSR view of ``G ∪ extra`` remembering which slots are graph edges.

    Parallel edges collapse to the lighter one; at equal weight the graph
    edge wins.  ``extra`` maps ordered pairs to weights and is mirrored for
    undirected graphs.
    """

    def __init__(self, g: Graph, extra: Mapping[tuple[int, int], int] | None = None):
        self.g = g
        n = g.n
        gs, gd, gw = g.src, g.dst, g.w
        if not g.directed:
            gs, gd, gw = np.concatenate([gs, gd]), np.concatenate([gd, gs]), np.concatenate([gw, gw])
        flag = np.ones(gs.size, dtype=np.int64)
        if extra:
            keys = np.array(list(extra.keys()), dtype=np.int64).reshape(-1, 2)
            ws = np.fromiter(extra.values(), dtype=np.int64, count=len(extra))
            hs, hd = keys[:, 0], keys[:, 1]
            if not g.directed:
                hs, hd, ws = np.concatenate([hs, hd]), np.concatenate([hd, hs]), np.concatenate([ws, ws])
            keep = hs != hd
            hs, hd, ws = hs[keep], hd[keep], ws[keep]
            gs, gd, gw = np.concatenate([gs, hs]), np.concatenate([gd, hd]), np.concatenate([gw, ws])
            flag = np.concatenate([flag, np.zeros(hs.size, dtype=np.int64)])
        order = np.lexsort((-flag, gw, gd, gs))
        gs, gd, gw, flag = gs[order], gd[order], gw[order], flag[order]
        first = np.ones(gs.size, dtype=bool)
        first[1:] = (gs[1:] != gs[:-1]) | (gd[1:] != gd[:-1])
        gs, gd, gw, flag = gs[first], gd[first], gw[first], flag[first]
        indptr = np.zeros(n + 1, dtype=np.int64)
        np.add.at(indptr, gs + 1, 1)
        np.cumsum(indptr, out=indptr)
        self.indptr, self.indices, self.weights = indptr, gd, gw
        self.is_graph = flag.astype(bool)
        self.slot_src = gs

    def search(self, source: int, max_hops: int) -> "SourceSearch":
        res = hop_layered_sssp(self.indptr, self.indices, self.weights, source, max_hops)
        return SourceSearch(self, int(source), int(max_hops), *res)


@dataclass(frozen=True)
class Hop:
    """One edge of an extracted path."""

    u: int
    v: int
    w: int
    is_graph: bool


class SourceSearch:
    """Result of one hop-layered search; answers any budget ``<= max_hops``."""

    def __init__(self, overlay, source, max_hops, dist, head, lv, lh, ld, lp, le, lprev, rounds):
        self.overlay = overlay
        self.source = source
        self.max_hops = max_hops
        self.dist_final = dist
        self.head = head
        self.lh, self.ld, self.lp, self.le, self.lprev = lh, ld, lp, le, lprev
        self.rounds = int(rounds)

    def _entry(self, v: int, budget: int) -> int:
        e = int(self.head[v])
        lh, lprev = self.lh, self.lprev
        while e >= 0 and lh[e] > budget:
            e = int(lprev[e])
        return e

    def dist(self, v: int, budget: int | None = None) -> float | int:
        budget = self.max_hops if budget is None else min(budget, self.max_hops)
        e = self._entry(v, budget)
        return math.inf if e < 0 else int(self.ld[e])

    def hops(self, v: int, budget: int | None = None) -> float | int:
        """Hop count of the extracted path (fewest hops among the shortest)."""
        budget = self.max_hops if budget is None else min(budget, self.max_hops)
        e = self._entry(v, budget)
        return math.inf if e < 0 else int(self.lh[e])

    def path_hops(self, v: int, budget: int | None = None) -> list[Hop] | None:
        budget = self.max_hops if budget is None else min(budget, self.max_hops)
        e = self._entry(v, budget)
        if e < 0:
            return None
        ov = self.overlay
        out = []
        while self.lp[e] >= 0:
            slot = int(self.le[e])
            u = int(self.lp[e])
            out.append(Hop(u, int(ov.indices[slot]), int(ov.weights[slot]), bool(ov.is_graph[slot])))
            e = self._entry(u, int(self.lh[e]) - 1)
        out.reverse()
        return out

    def path(self, v: int, budget: int | None = None) -> list[int] | None:
        hops = self.path_hops(v, budget)
        if hops is None:
            return None
        return [self.source] + [h.v for h in hops]


class HopBoundedPaths:
    """``dist^{(R)}`` tables and witness paths for a set of sources."""

    def __init__(self, overlay: Overlay, R: int, searches: dict[int, SourceSearch]):
        self.overlay = overlay
        self.R = R
        self.searches = searches

    def dist(self, u: int, v: int, R: int | None = None):
        return self.searches[u].dist(v, R)

    def path(self, u: int, v: int, R: int | None = None):
        return self.searches[u].path(v, R)

    def path_hops(self, u: int, v: int, R: int | None = None):
        return self.searches[u].path_hops(v, R)

    def table(self) -> np.ndarray:
        """Dense ``len(sources) x n`` distance table (INF for unreachable)."""
        return np.stack([self.searches[s].dist_final for s in sorted(self.searches)])


def apsp_exact(g: Graph) -> np.ndarray:
    """All-pairs distances; unreachable entries equal ``INF``."""
    if g.n == 0:
        return np.empty((0, 0), dtype=np.int64)
    return g.distances_from(np.arange(g.n))


def apsp_hop_bounded(g: Graph, extra: Mapping[tuple[int, int], int] | None, R: int,
                     sources: Iterable[int] | None = None) -> HopBoundedPaths:
    """Hop-bounded distances and paths in ``G ∪ extra`` with at most ``R`` edges."""
    if R < 1:
        raise GraphError("hop budget must be >= 1")
    ov = Overlay(g, extra)
    srcs = range(g.n) if sources is None else sorted(set(int(s) for s in sources))
    return HopBoundedPaths(ov, R, {s: ov.search(s, R) for s in srcs})


def min_hops_from(g: Graph, u: int) -> tuple[np.ndarray, np.ndarray]:
    """``(dist, h)`` from ``u``: ``h[v]`` is the fewest hops of a shortest path, -1 if unreachable."""
    ov = Overlay(g)
    s = ov.search(u, max(g.n - 1, 1))
    h = np.where(s.head >= 0, s.lh[np.maximum(s.head, 0)], -1)
    return s.dist_final, h


def min_hops(g: Graph, u: int, v: int) -> float | int:
    if u == v:
        return 0
    _, h = min_hops_from(g, u)
    return math.inf if h[v] < 0 else int(h[v])


def _bounded_dist(adj: list[dict[int, int]], s: int, t: int, bound: int) -> bool:
    """True iff ``dist(s, t) <= bound`` in the adjacency ``adj``."""
    if s == t:
        return True
    best = {s: 0}
    heap = [(0, s)]
    while heap:
        d, x = heapq.heappop(heap)
        if d > best.get(x, math.inf):
            continue
        if x == t:
            return True
        for y, w in adj[x].items():
            nd = d + w
            if nd <= bound and nd < best.get(y, math.inf):
                best[y] = nd
                heapq.heappush(heap, (nd, y))
    return False


def greedy_spanner(g: Graph, k: int) -> set[tuple[int, int]]:
    """Greedy (2k-1)-spanner: scan edges by (weight, u, v), keep an edge
    only if the current spanner has no path within ``(2k-1) * w``."""
    if g.directed:
        raise GraphError("greedy spanner needs an undirected graph")
    if k < 1:
        raise GraphError("k must be >= 1")
    stretch = 2 * k - 1
    adj: list[dict[int, int]] = [dict() for _ in range(g.n)]
    kept = set()
    order = np.lexsort((g.dst, g.src, g.w))
    for i in order:
        u, v, w = int(g.src[i]), int(g.dst[i]), int(g.w[i])
        if _bounded_dist(adj, u, v, stretch * w):
            continue
        adj[u][v] = w
        adj[v][u] = w
        kept.add((u, v))
    return kept


def complete_distance_graph(g: Graph, vertices: Sequence[int]) -> tuple[Graph, list[int]]:
    """Undirected clique on ``vertices`` weighted by ``dist_G`` (relabelled 0..s-1).

    Pairs in different components are omitted.
    """
    vertices = sorted(set(int(x) for x in vertices))
    d = g.distances_from(vertices)[:, vertices]
    rows = [(i, j, int(d[i, j])) for i in range(len(vertices))
            for j in range(i + 1, len(vertices)) if d[i, j] < INF]
    return Graph(len(vertices), rows, directed=False), vertices
