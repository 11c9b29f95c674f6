"""Preservers, emulators and spanners built on top of missing spanners."""
from __future__ import annotations

import json
import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Sequence

import numpy as np

from .graph import Graph, GraphError, PairSet
from .hopsets import (BASE_TCW, EXACT, REACH, BaseAlgorithm, Hopset, level_hopset,
                      multiplicative)
from .kernels import INF
from .missing import ConstructionError, MissingSpanner, hopsets_to_missing_spanner
from .paths import Overlay, complete_distance_graph, greedy_spanner
from .schedule import (BetaSchedule, custom_schedule, schedule_directed, schedule_undirected,
                       undirected_max_k)

log = logging.getLogger(__name__)

# additive constant of the weighted near-additive spanner: C_WEIGHTED * r * 2^k * W_max
C_WEIGHTED = 4
MAX_RETRIES = 3
_SEED_STRIDE = 7919

KINDS = ("preserver", "reachability-preserver", "near-additive-spanner", "emulator",
         "sourcewise", "slack", "spanner")


@dataclass
class SubgraphResult:
    n: int
    directed: bool
    edges: dict[tuple[int, int], int]
    kind: str
    alpha: Fraction | None          # multiplicative stretch; None = reachability only
    beta_add: int = 0
    provenance: dict = field(default_factory=dict)
    skipped: list[tuple[int, int]] = field(default_factory=list)

    def __len__(self):
        return len(self.edges)

    def as_graph(self) -> Graph:
        return Graph(self.n, [(u, v, w) for (u, v), w in self.edges.items()], directed=self.directed)

    def header(self) -> dict:
        return {"kind": self.kind, "alpha": None if self.alpha is None else str(self.alpha),
                "beta_add": self.beta_add, "n": self.n, "directed": self.directed,
                "seed": self.provenance.get("seed"), "schedule": self.provenance.get("schedule"),
                "size": len(self.edges)}

    def to_text(self) -> str:
        rows = "".join(f"{u} {v} {w}\n" for (u, v), w in sorted(self.edges.items()))
        return "# " + json.dumps(self.header(), sort_keys=True) + "\n" + rows

    @classmethod
    def from_text(cls, text: str) -> "SubgraphResult":
        lines = text.splitlines()
        head = json.loads(lines[0][2:])
        edges = {}
        for raw in lines[1:]:
            if raw.strip():
                u, v, w = (int(x) for x in raw.split())
                edges[(u, v)] = w
        alpha = None if head["alpha"] is None else Fraction(head["alpha"])
        return cls(head["n"], head["directed"], edges, head["kind"], alpha, head["beta_add"],
                   {"seed": head.get("seed"), "schedule": head.get("schedule")})


def _subgraph_edges(g: Graph, keys: Iterable[tuple[int, int]]) -> dict[tuple[int, int], int]:
    wm = g.weight_map
    return {k: wm[k] for k in keys}


def with_retries(build: Callable[[int], object], seed: int):
    """Call ``build(seed')`` with fresh seeds until no hopset claim fails."""
    last = None
    for attempt in range(MAX_RETRIES + 1):
        try:
            return build(seed + attempt * _SEED_STRIDE)
        except ConstructionError as exc:
            log.warning("hopset claim failed (seed %d): %s", seed + attempt * _SEED_STRIDE, exc)
            last = exc
    raise last


# -- preservers ------------------------------------------------------------------

def preserver_from_missing(ms: MissingSpanner, pairs: Iterable[tuple[int, int]] | PairSet,
                           kind: str | None = None) -> SubgraphResult:
    """``G'`` plus the missing edges of each demand pair's witness path.

    Unreachable pairs are skipped and listed in ``skipped``.
    """
    g = ms.graph
    pairs = list(pairs)
    keys = set(ms.g_prime)
    skipped = []
    dist = {}
    if not ms.reachability and pairs:
        srcs = sorted({u for u, _ in pairs})
        rows = g.distances_from(srcs)
        dist = {s: rows[i] for i, s in enumerate(srcs)}
    for u, v in pairs:
        if u == v:
            continue
        try:
            wp = ms.witness_path(u, v)
        except GraphError:
            skipped.append((u, v))
            continue
        if not ms.reachability and wp.length > ms.t * int(dist[u][v]):
            raise ConstructionError(
                f"witness for ({u}, {v}) has length {wp.length} > {ms.t} * {int(dist[u][v])}")
        keys.update(wp.missing)
    if skipped:
        log.warning("skipped %d unreachable demand pairs", len(skipped))
    bound = len(ms.g_prime) + len(pairs) * ms.r
    if len(keys) > bound:
        raise ConstructionError(f"preserver size {len(keys)} exceeds |G'| + p r = {bound}")
    if kind is None:
        kind = "reachability-preserver" if ms.reachability else "preserver"
    return SubgraphResult(g.n, g.directed, _subgraph_edges(g, keys), kind, ms.t, 0,
                          {"schedule": ms.schedule.as_dict(), "g_prime": len(ms.g_prime),
                           "r": ms.r, "p": len(pairs)}, skipped)


def build_hierarchy(g: Graph, schedule: BetaSchedule, base: BaseAlgorithm, mode, seed: int,
                    undirected: bool = False) -> list[Hopset]:
    return [level_hopset(g, base, b, mode, seed + i, undirected=undirected)
            for i, b in enumerate(schedule.betas, 1)]


def directed_preserver_pipeline(g: Graph, pairs, base: BaseAlgorithm = BASE_TCW, eps=0,
                                seed: int = 0) -> SubgraphResult:
    """Schedule, hopset hierarchy, missing spanner, then per-pair completion."""
    pairs = list(pairs)
    eps = Fraction(eps)
    sched = schedule_directed(g.n, max(1, len(pairs)), base.a, base.b, eps)

    def build(s):
        mode = EXACT if eps == 0 else multiplicative(sched.eps[0])
        hier = build_hierarchy(g, sched, base, mode, s)
        ms = hopsets_to_missing_spanner(g, hier, sched)
        res = preserver_from_missing(ms, pairs)
        res.provenance.update(seed=s, base=base.name, eps=str(eps))
        return res

    return with_retries(build, seed)


def reachability_preserver_pipeline(g: Graph, pairs, seed: int = 0) -> SubgraphResult:
    """Shortcut hierarchy (folklore tradeoff a=2, b=0) into a reachability preserver."""
    if not g.directed:
        raise GraphError("reachability preservers are for directed graphs")
    pairs = list(pairs)
    sched = schedule_directed(g.n, max(1, len(pairs)), 2.0, 0.0, 0)

    def build(s):
        hier = build_hierarchy(g, sched, BASE_TCW, REACH, s)
        ms = hopsets_to_missing_spanner(g, hier, sched)
        res = preserver_from_missing(ms, pairs)
        res.provenance.update(seed=s)
        return res

    return with_retries(build, seed)


def _undirected_schedule(n: int, k: int | None, eps) -> BetaSchedule:
    kmax = undirected_max_k(n)
    if kmax < 1:
        # too small for the recurrence: single exact closure level
        return custom_schedule(n, [1], 0)
    return schedule_undirected(n, min(k or 1, kmax), eps)


def undirected_missing_spanner(g: Graph, k: int | None = None, eps=Fraction(1, 2), seed: int = 0,
                               base: BaseAlgorithm = BASE_TCW) -> MissingSpanner:
    if g.directed:
        raise GraphError("needs an undirected graph")
    sched = _undirected_schedule(g.n, k, eps)

    def build(s):
        hier = build_hierarchy(g, sched, base, EXACT, s, undirected=True)
        return hopsets_to_missing_spanner(g, hier, sched)

    return with_retries(build, seed)


def undirected_preserver_pipeline(g: Graph, pairs, k: int | None = None, eps=Fraction(1, 2),
                                  seed: int = 0, base: BaseAlgorithm = BASE_TCW) -> SubgraphResult:
    """Undirected schedule and sublinear hopsets into a near-exact preserver."""
    if g.directed:
        raise GraphError("needs an undirected graph")
    pairs = list(pairs)
    sched = _undirected_schedule(g.n, k, eps)

    def build(s):
        hier = build_hierarchy(g, sched, base, EXACT, s, undirected=True)
        ms = hopsets_to_missing_spanner(g, hier, sched)
        res = preserver_from_missing(ms, pairs)
        res.provenance.update(seed=s)
        return res

    return with_retries(build, seed)


# -- emulators and near-additive spanners ----------------------------------------

def _require_unweighted_undirected(g: Graph):
    if g.directed:
        raise GraphError("needs an undirected graph")
    if g.m and (g.w.min() != 1 or g.w_max != 1):
        raise GraphError("needs an unweighted (unit-weight) graph")


def emulator_from_hopset(g: Graph, h: Hopset, k: int) -> SubgraphResult:
    """Hopset edges plus a greedy (2k-1)-spanner of ``g``."""
    _require_unweighted_undirected(g)
    if h.mode.kind == "reachability":
        raise GraphError("emulators need a distance hopset")
    edges = _subgraph_edges(g, greedy_spanner(g, k))
    for (u, v), w in h.edges.items():
        key = g.edge_key(u, v)
        if w < edges.get(key, math.inf):
            edges[key] = w
    return SubgraphResult(g.n, False, edges, "emulator", 1 + h.mode.eps, (2 * k - 1) * h.beta,
                          {"hopset_beta": h.beta, "k": k, "seed": h.seed})


def _shortest_path_keys(g: Graph, ov: Overlay, x: int, ys: Sequence[int]) -> set[tuple[int, int]]:
    s = ov.search(x, max(1, g.n - 1))
    out = set()
    for y in ys:
        hops = s.path_hops(y)
        if hops is None:
            raise GraphError(f"({x}, {y}) not connected")
        out.update(g.edge_key(a.u, a.v) for a in hops)
    return out


def spanner_from_emulator(g: Graph, h: Hopset, k: int, eps) -> SubgraphResult:
    """Replace every emulator edge of weight <= 10 k beta / eps by a shortest path."""
    eps = Fraction(eps)
    if not 0 < eps < 1:
        raise GraphError("eps must lie in (0, 1)")
    if h.mode.eps > eps:
        raise GraphError("eps must be at least the hopset's eps")
    emu = emulator_from_hopset(g, h, k)
    limit = 10 * k * h.beta
    keys = {key for key in emu.edges if g.has_edge(*key)}
    ov = Overlay(g)
    todo: dict[int, list[int]] = {}
    for (x, y), w in emu.edges.items():
        if not g.has_edge(x, y) and w * eps <= limit:
            todo.setdefault(x, []).append(y)
    for x in sorted(todo):
        keys |= _shortest_path_keys(g, ov, x, todo[x])
    return SubgraphResult(g.n, False, _subgraph_edges(g, keys), "near-additive-spanner",
                          1 + 2 * eps, (2 * k - 1) * h.beta,
                          {"hopset_beta": h.beta, "k": k, "eps": str(eps), "seed": h.seed})


def weighted_near_additive_spanner(g: Graph, schedule: BetaSchedule | None = None,
                                   hopsets: Sequence[Hopset] | None = None, k: int = 1,
                                   eps=Fraction(1, 2), seed: int = 0) -> SubgraphResult:
    """Missing spanner of the hierarchy plus a greedy ``(2^(k+1)-1)``-parameter spanner.

    Without explicit ``schedule``/``hopsets`` the undirected hierarchy for
    ``(k, eps)`` is built.
    """
    if g.directed:
        raise GraphError("needs an undirected graph")
    if hopsets is None:
        ms = undirected_missing_spanner(g, k, eps, seed)
    else:
        ms = hopsets_to_missing_spanner(g, hopsets, schedule)
    spanner_k = 2 ** (k + 1) - 1
    keys = set(ms.g_prime) | greedy_spanner(g, spanner_k)
    beta_add = C_WEIGHTED * ms.r * 2 ** k * g.w_max
    return SubgraphResult(g.n, False, _subgraph_edges(g, keys), "near-additive-spanner", ms.t,
                          beta_add, {"schedule": ms.schedule.as_dict(), "r": ms.r, "k": k,
                                     "seed": seed, "g_prime": len(ms.g_prime)})


# -- sourcewise spanners ---------------------------------------------------------

def nearest_source_tree(g: Graph, sources: Sequence[int]) -> set[tuple[int, int]]:
    """Graph edges of a shortest-path tree hanging off a dummy root joined to
    every source with unit weight."""
    n = g.n
    rows = g.edges() + [(n, int(s), 1) for s in sources]
    aug = Graph(n + 1, rows, directed=g.directed)
    s = Overlay(aug).search(n, n + 1)
    keys = set()
    for v in range(n):
        hops = s.path_hops(v)
        if hops:
            keys.update(aug.edge_key(a.u, a.v) for a in hops if a.u != n and a.v != n)
    return {g.edge_key(*kk) for kk in keys}


def _source_pairs(g: Graph, S: Sequence[int], k: int) -> list[tuple[int, int]]:
    clique, labels = complete_distance_graph(g, S)
    return sorted((labels[i], labels[j]) for i, j in greedy_spanner(clique, k))


def sourcewise_spanner(g: Graph, S: Iterable[int], k: int, eps=Fraction(1, 2),
                       seed: int = 0) -> SubgraphResult:
    """Preserver over a (2k-1)-spanner of the source distance clique, plus the
    nearest-source tree."""
    if g.directed:
        raise GraphError("needs an undirected graph")
    S = sorted(set(int(s) for s in S))
    if not S:
        raise GraphError("source set must be nonempty")
    pairs = _source_pairs(g, S, k)
    pres = undirected_preserver_pipeline(g, pairs, eps=eps, seed=seed)
    keys = set(pres.edges) | nearest_source_tree(g, S)
    return SubgraphResult(g.n, False, _subgraph_edges(g, keys), "sourcewise",
                          (4 * k - 1) * pres.alpha, 0,
                          {"sources": S, "k": k, "pairs": len(pairs), "seed": pres.provenance.get("seed"),
                           "schedule": pres.provenance.get("schedule")})


def partition_sources(n: int, S: Sequence[int], k: int) -> list[list[int]]:
    size = max(1, math.floor(n ** ((k - 1) / k) + 1e-9))
    S = sorted(set(int(s) for s in S))
    return [S[i:i + size] for i in range(0, len(S), size)]


def sourcewise_spanner_partitioned(g: Graph, S: Iterable[int], k: int, eps=Fraction(1, 2),
                                   seed: int = 0) -> SubgraphResult:
    """Union of parameter-(k-1) sourcewise spanners over parts of size <= n^((k-1)/k)."""
    if k < 2:
        raise GraphError("k must be >= 2")
    parts = partition_sources(g.n, list(S), k)
    if not parts:
        raise GraphError("source set must be nonempty")
    keys: set[tuple[int, int]] = set()
    alpha = Fraction(0)
    for i, part in enumerate(parts):
        res = sourcewise_spanner(g, part, k - 1, eps, seed + i)
        keys |= set(res.edges)
        alpha = max(alpha, res.alpha)
    return SubgraphResult(g.n, False, _subgraph_edges(g, keys), "sourcewise", alpha, 0,
                          {"parts": parts, "k": k, "seed": seed})


# -- density nets and slack spanners --------------------------------------------

@dataclass
class DensityNet:
    net: list[int]
    radius: np.ndarray          # R(x, eps) per vertex
    eps: float

    def __len__(self):
        return len(self.net)


def density_net(g: Graph, eps, dist: np.ndarray | None = None) -> DensityNet:
    """Greedy net: scan vertices by ``(R(x, eps), x)`` and keep ``x`` unless a
    kept vertex lies within ``2 R(x, eps)``."""
    eps = float(eps)
    if not 0 < eps <= 1:
        raise GraphError("eps must lie in (0, 1]")
    if g.directed:
        raise GraphError("density nets need an undirected graph")
    n = g.n
    d = g.distances_from(range(n)) if dist is None else dist
    rank = max(1, math.ceil(eps * n - 1e-9))
    radius = np.sort(d, axis=1)[:, rank - 1]
    net: list[int] = []
    for x in np.lexsort((np.arange(n), radius)):
        x = int(x)
        lim = 2 * int(radius[x]) if radius[x] < INF else INF
        if all(d[x, y] > lim for y in net):
            net.append(x)
    return DensityNet(sorted(net), radius, eps)


def nearest_net_edges(g: Graph, net: Sequence[int]) -> tuple[set[tuple[int, int]], np.ndarray]:
    """Shortest paths from every vertex to its nearest net vertex (ties: lowest id)."""
    net = sorted(net)
    d = g.distances_from(net)
    owner = np.argmin(d, axis=0)
    ov = Overlay(g)
    keys = set()
    for i, c in enumerate(net):
        members = [int(v) for v in np.flatnonzero((owner == i) & (d[i] < INF)) if v != c]
        if members:
            keys |= _shortest_path_keys(g, ov, c, members)
    return keys, np.asarray(net)[owner]


def slack_spanner(g: Graph, eps, k: int, seed: int = 0, pres_eps=Fraction(1, 2)) -> SubgraphResult:
    """Nearest-net paths plus a preserver over a greedy spanner of the net clique.

    Claims the ``eps``-slack bound ``5 + 6 (2k-1) t`` with ``t`` the
    preserver's stretch.
    """
    eps_f = float(eps)
    if not 0 < eps_f < 1:
        raise GraphError("eps must lie in (0, 1)")
    if g.directed:
        raise GraphError("needs an undirected graph")
    dn = density_net(g, eps_f)
    keys, _ = nearest_net_edges(g, dn.net)
    pairs = _source_pairs(g, dn.net, k) if len(dn.net) > 1 else []
    pres = undirected_preserver_pipeline(g, pairs, eps=pres_eps, seed=seed)
    keys |= set(pres.edges)
    alpha = 5 + 6 * (2 * k - 1) * pres.alpha
    return SubgraphResult(g.n, False, _subgraph_edges(g, keys), "slack", alpha, 0,
                          {"net": dn.net, "slack_eps": eps_f, "k": k,
                           "seed": pres.provenance.get("seed"),
                           "schedule": pres.provenance.get("schedule")})
