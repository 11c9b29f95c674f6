"""Hopset hierarchies to r-missing t-spanners.

Level ``i`` routes every new edge of ``H_i`` along a ``beta_{i-1}``-hop
shortest path in ``G ∪ H_{i-1}`` and keeps that path's graph edges.  Any
reachable pair is then served by a ``beta_l``-hop path in ``G ∪ H_l`` whose
hopset edges unfold level by level into paths that lie inside ``G'``; only
the top-level graph edges may be missing from ``G'``.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .graph import Graph, GraphError
from .hopsets import ApproxMode, Hopset
from .paths import Hop, Overlay
from .schedule import BetaSchedule, custom_schedule


class ConstructionError(RuntimeError):
    """A hopset failed its hopbound claim during construction."""

    def __init__(self, msg: str, edge: tuple[int, int] | None = None, level: int | None = None):
        super().__init__(msg)
        self.edge = edge
        self.level = level


@dataclass
class WitnessPath:
    vertices: list[int]
    edges: list[tuple[int, int, int]]
    missing: list[tuple[int, int]]

    @property
    def length(self) -> int:
        return sum(w for _, _, w in self.edges)


@dataclass
class MissingSpanner:
    graph: Graph
    g_prime: set[tuple[int, int]]
    r: int
    t: Fraction | None                 # None in reachability mode
    hierarchy: list[Hopset]
    schedule: BetaSchedule
    paths: dict[tuple[int, int], list[Hop]] = field(repr=False)
    first_level: dict[tuple[int, int], int] = field(repr=False)
    _top: Overlay | None = field(default=None, repr=False)
    _searches: dict = field(default_factory=dict, repr=False)
    _expanded: dict = field(default_factory=dict, repr=False)

    @property
    def levels(self) -> int:
        return len(self.hierarchy)

    @property
    def reachability(self) -> bool:
        return self.t is None

    def size_bound(self) -> int:
        """``sum_i |H_i| * beta_{i-1}``."""
        return sum(len(h) * self.schedule.beta(i) for i, h in enumerate(self.hierarchy, 1))

    def _top_search(self, u: int):
        if self._top is None:
            extra = self.hierarchy[-1].edges if self.hierarchy else None
            self._top = Overlay(self.graph, extra)
        s = self._searches.get(u)
        if s is None:
            if len(self._searches) > 4096:
                self._searches.clear()
            s = self._top.search(u, self.r)
            self._searches[u] = s
        return s

    def _expand(self, x: int, y: int) -> list[tuple[int, int, int]]:
        """Graph-edge expansion of hopset edge ``(x, y)`` via stored paths."""
        key = self.graph.edge_key(x, y)
        flipped = key != (x, y)
        got = self._expanded.get(key)
        if got is None:
            got = []
            for hop in self.paths[key]:
                if hop.is_graph:
                    got.append((hop.u, hop.v, hop.w))
                else:
                    got.extend(self._expand(hop.u, hop.v))
            self._expanded[key] = got
        if flipped:
            return [(b, a, w) for a, b, w in reversed(got)]
        return got

    def witness_path(self, u: int, v: int) -> WitnessPath:
        if u == v:
            return WitnessPath([u], [], [])
        hops = self._top_search(u).path_hops(v)
        if hops is None:
            raise GraphError(f"({u}, {v}) is not reachable")
        edges = []
        missing = []
        for hop in hops:
            if hop.is_graph:
                edges.append((hop.u, hop.v, hop.w))
                key = self.graph.edge_key(hop.u, hop.v)
                if key not in self.g_prime:
                    missing.append(key)
            else:
                edges.extend(self._expand(hop.u, hop.v))
        return WitnessPath([u] + [b for _, b, _ in edges], edges, missing)

    # -- serialization -----------------------------------------------------
    def to_json(self) -> str:
        levels = {}
        for key, hops in self.paths.items():
            lvl = self.first_level[key]
            levels.setdefault(str(lvl), []).append(
                {"edge": list(key), "path": [[h.u, h.v, h.w, int(h.is_graph)] for h in hops]})
        for rows in levels.values():
            rows.sort(key=lambda r: r["edge"])
        doc = {
            "format": "hopsparse-missing-spanner/1",
            "n": self.graph.n,
            "directed": self.graph.directed,
            "r": self.r,
            "t": None if self.t is None else str(self.t),
            "g_prime": sorted(list(e) for e in self.g_prime),
            "schedule": {"betas": self.schedule.betas, "eps": [str(e) for e in self.schedule.eps],
                         "regime": self.schedule.regime},
            "hierarchy": [h.to_text() for h in self.hierarchy],
            "levels": dict(sorted(levels.items(), key=lambda kv: int(kv[0]))),
        }
        return json.dumps(doc, sort_keys=True)

    @classmethod
    def from_json(cls, text: str, graph: Graph) -> "MissingSpanner":
        doc = json.loads(text)
        if doc["n"] != graph.n or doc["directed"] != graph.directed:
            raise GraphError("serialized spanner does not match the graph")
        sched = BetaSchedule(graph.n, doc["schedule"]["betas"],
                             [Fraction(e) for e in doc["schedule"]["eps"]], doc["schedule"]["regime"])
        paths, first = {}, {}
        for lvl, rows in doc["levels"].items():
            for row in rows:
                key = tuple(row["edge"])
                paths[key] = [Hop(a, b, w, bool(g)) for a, b, w, g in row["path"]]
                first[key] = int(lvl)
        return cls(graph, {tuple(e) for e in doc["g_prime"]}, doc["r"],
                   None if doc["t"] is None else Fraction(doc["t"]),
                   [Hopset.from_text(h) for h in doc["hierarchy"]], sched, paths, first)


def _stretch_of(mode: ApproxMode) -> Fraction | None:
    return mode.stretch


def hopsets_to_missing_spanner(g: Graph, hierarchy: Sequence[Hopset],
                               schedule: BetaSchedule | None = None) -> MissingSpanner:
    """Build ``G'`` from hopsets ``H_1..H_l`` with hopbounds from ``schedule``.

    Raises :class:`ConstructionError` naming the first hopset edge whose
    ``beta_{i-1}``-hop path in ``G ∪ H_{i-1}`` is missing or too long.
    """
    hierarchy = list(hierarchy)
    if schedule is None:
        schedule = custom_schedule(g.n, [h.beta for h in hierarchy])
    if schedule.levels != len(hierarchy):
        raise GraphError(f"{len(hierarchy)} hopsets for a {schedule.levels}-level schedule")
    schedule.check()
    for i, h in enumerate(hierarchy, 1):
        if h.beta > schedule.beta(i):
            raise GraphError(f"H_{i} claims hopbound {h.beta} > beta_{i} = {schedule.beta(i)}")
    reach = any(h.mode.kind == "reachability" for h in hierarchy)

    g_prime: set[tuple[int, int]] = set()
    paths: dict[tuple[int, int], list[Hop]] = {}
    first_level: dict[tuple[int, int], int] = {}
    prev_extra: dict | None = None
    prev_stretch: Fraction | None = Fraction(1)
    for i, h in enumerate(hierarchy, 1):
        budget = max(1, schedule.beta(i - 1))
        new = sorted(e for e in h.edges if e not in first_level)
        if new:
            ov = Overlay(g, prev_extra)
            by_src: dict[int, list[tuple[int, int]]] = {}
            for e in new:
                by_src.setdefault(e[0], []).append(e)
            for u in sorted(by_src):
                search = ov.search(u, budget)
                for e in by_src[u]:
                    hops = search.path_hops(e[1])
                    if hops is None:
                        raise ConstructionError(
                            f"level {i}: no <= {budget}-hop path for hopset edge {e} "
                            f"in G ∪ H_{i - 1}", e, i)
                    if not reach and prev_stretch is not None:
                        length = sum(x.w for x in hops)
                        if length > prev_stretch * h.edges[e]:
                            raise ConstructionError(
                                f"level {i}: {budget}-hop path for {e} has length {length} "
                                f"> {prev_stretch} * {h.edges[e]}", e, i)
                    paths[e] = hops
                    first_level[e] = i
                    for x in hops:
                        if x.is_graph:
                            g_prime.add(g.edge_key(x.u, x.v))
        prev_extra = h.edges
        prev_stretch = _stretch_of(h.mode)

    if reach:
        t = None
    else:
        t = Fraction(1)
        for h in hierarchy:
            t *= h.mode.stretch
    r = schedule.beta(len(hierarchy)) if hierarchy else max(g.n, 1)
    ms = MissingSpanner(g, g_prime, r, t, hierarchy, schedule, paths, first_level)
    bound = ms.size_bound()
    if len(g_prime) > bound:
        raise ConstructionError(f"|G'| = {len(g_prime)} exceeds sum |H_i| beta_(i-1) = {bound}")
    return ms


def witness_path(ms: MissingSpanner, u: int, v: int) -> WitnessPath:
    return ms.witness_path(u, v)
