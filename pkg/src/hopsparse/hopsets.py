"""Hopset and shortcut constructions.

A hopset ``H`` for ``G`` is a set of weighted pairs such that paths with at
most ``beta`` edges in ``G ∪ H`` approximate ``dist_G``.  The base algorithm
shipped here is the weighted transitive closure (``beta = 1``); the sampling
transforms turn any base algorithm into sparser hopsets with larger hopbound.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Callable

import numpy as np

from .graph import Graph, GraphError, transitive_closure
from .kernels import INF
from .paths import min_hops_from

# sampling constant: per-vertex probability min(1, C_SAMPLE * ln n / scale)
C_SAMPLE = 4
# hopbound slack on claims made by the sampling transforms
C_HOP = 3


@dataclass(frozen=True)
class ApproxMode:
    kind: str  # "exact" | "multiplicative" | "reachability"
    eps: Fraction = Fraction(0)

    def __post_init__(self):
        if self.kind not in ("exact", "multiplicative", "reachability"):
            raise GraphError(f"unknown approximation mode {self.kind!r}")
        if self.kind == "multiplicative" and not (0 < self.eps < 1):
            raise GraphError("multiplicative eps must lie in (0, 1)")

    @property
    def stretch(self) -> Fraction | None:
        """Multiplicative slack ``1 + eps``; ``None`` for reachability."""
        if self.kind == "reachability":
            return None
        return 1 + self.eps

    def __str__(self):
        if self.kind == "multiplicative":
            return f"mult:{self.eps}"
        return {"exact": "exact", "reachability": "reach"}[self.kind]

    @classmethod
    def parse(cls, text: str) -> "ApproxMode":
        text = text.strip()
        if text in ("exact", "reach", "reachability"):
            return cls("exact" if text == "exact" else "reachability")
        if text.startswith("mult:"):
            return cls("multiplicative", Fraction(text[5:]))
        raise GraphError(f"cannot parse mode {text!r}")


EXACT = ApproxMode("exact")
REACH = ApproxMode("reachability")


def multiplicative(eps) -> ApproxMode:
    return ApproxMode("multiplicative", Fraction(eps))


@dataclass
class Hopset:
    edges: dict[tuple[int, int], int]
    beta: int
    mode: ApproxMode = EXACT
    seed: int | None = None
    landmarks: tuple[int, ...] = field(default=(), repr=False)

    def __len__(self):
        return len(self.edges)

    def to_text(self) -> str:
        head = f"# hopset beta={self.beta} mode={self.mode} seed={self.seed}\n"
        return head + "".join(f"{u} {v} {w}\n" for (u, v), w in sorted(self.edges.items()))

    @classmethod
    def from_text(cls, text: str) -> "Hopset":
        lines = text.splitlines()
        if not lines or not lines[0].startswith("# hopset"):
            raise GraphError("missing hopset header")
        meta = dict(tok.split("=", 1) for tok in lines[0][len("# hopset"):].split())
        edges = {}
        for raw in lines[1:]:
            if raw.strip() and not raw.startswith("#"):
                u, v, w = (int(x) for x in raw.split())
                edges[(u, v)] = w
        seed = None if meta.get("seed", "None") == "None" else int(meta["seed"])
        return cls(edges, int(meta["beta"]), ApproxMode.parse(meta.get("mode", "exact")), seed)

    def save(self, path) -> None:
        Path(path).write_text(self.to_text())


@dataclass(frozen=True)
class BaseAlgorithm:
    """A hopset construction with declared size tradeoff ``~n^2 / beta^a``
    valid for ``beta <= n^b``.

    ``construct(graph, beta, mode, seed)`` must return a :class:`Hopset`.
    """

    construct: Callable[[Graph, int, ApproxMode, int], Hopset]
    a: float
    b: float
    name: str = "custom"

    def __post_init__(self):
        if not self.a > 1:
            raise GraphError("tradeoff exponent a must exceed 1")
        if not (0 <= self.b < min(1.0, 1.0 / (self.a - 1))):
            raise GraphError("threshold exponent b must satisfy 0 <= b < min(1, 1/(a-1))")


def _strip_graph_edges(g: Graph, pairs: dict[tuple[int, int], int]) -> dict[tuple[int, int], int]:
    out = {}
    for (u, v), w in pairs.items():
        if u == v:
            continue
        key = g.edge_key(u, v)
        gw = g.weight_map.get(key)
        if gw is not None and gw <= w:
            continue
        if key in out and out[key] <= w:
            continue
        out[key] = w
    return out


def base_tcw(g: Graph, mode: ApproxMode = EXACT) -> Hopset:
    """The weighted closure minus the graph's own edges; hopbound 1."""
    tc = transitive_closure(g)
    return Hopset(_strip_graph_edges(g, tc.dist), 1, REACH if mode.kind == "reachability" else EXACT)


BASE_TCW = BaseAlgorithm(lambda g, beta, mode, seed: base_tcw(g, mode), a=2.0, b=0.0, name="tcw")


def _cap(g: Graph, beta: float) -> int:
    return int(min(max(1, g.n - 1), max(1, math.ceil(beta))))


def sample_landmarks(n: int, prob: float, seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    if prob >= 1:
        return np.arange(n, dtype=np.int64)
    return np.flatnonzero(rng.random(n) < prob).astype(np.int64)


def _net_hopset(g: Graph, base: BaseAlgorithm, landmarks: np.ndarray, radius: int,
                beta_net: int, mode: ApproxMode, seed: int) -> tuple[dict, np.ndarray]:
    """Run ``base`` on the landmark net graph (pairs within ``radius`` minimal
    hops) and map its edges back, reweighted by ``dist_G``."""
    L = landmarks
    index = {int(x): i for i, x in enumerate(L)}
    drows = np.empty((L.size, g.n), dtype=np.int64)
    rows = []
    for i, x in enumerate(L):
        dist, h = min_hops_from(g, int(x))
        drows[i] = dist
        hl = h[L]
        ok = np.flatnonzero((hl > 0) & (hl <= radius))
        rows.extend((i, int(j), int(dist[L[j]])) for j in ok)
    net = Graph(int(L.size), rows, directed=g.directed)
    hn = base.construct(net, beta_net, mode, seed)
    pairs = {}
    for (i, j) in hn.edges:
        x, y = int(L[i]), int(L[j])
        d = int(drows[i, y])
        if d >= INF:
            raise GraphError(f"base hopset edge ({x}, {y}) joins unreachable landmarks")
        pairs[(x, y)] = d
    return _strip_graph_edges(g, pairs), drows


def sublinear_from_superlinear(g: Graph, base: BaseAlgorithm, beta: int,
                               mode: ApproxMode = EXACT, seed: int = 0) -> Hopset:
    """Sparser hopsets for hopbounds above the base's threshold ``n^b``.

    Samples landmarks at rate ``~q log n`` with
    ``q = (beta / (n log n)^b)^(1/(b-1))``, joins landmarks whose minimal-hop
    shortest path has at most ``1/q`` edges, and runs ``base`` on that net at
    hopbound ``|L|^b``.  The result claims hopbound ``C_HOP * |L|^b / q``.
    """
    n = g.n
    if mode.kind == "reachability":
        raise GraphError("use shortcut_folklore for reachability")
    if n < 2 or beta <= n ** base.b:
        raise GraphError("beta must exceed n^b; call the base algorithm directly")
    logn = math.log(n)
    q = (beta / (n * logn) ** base.b) ** (1.0 / (base.b - 1.0))
    radius = max(1, math.floor(1.0 / q))
    L = sample_landmarks(n, C_SAMPLE * q * logn, seed)
    beta_net = max(1, math.floor(L.size ** base.b))
    pairs, _ = _net_hopset(g, base, L, radius, beta_net, mode, seed)
    return Hopset(pairs, _cap(g, C_HOP * beta_net * radius), mode, seed, tuple(L.tolist()))


def folklore_exact_hopset(g: Graph, beta: int, seed: int = 0) -> Hopset:
    """Closure restricted to ``~n log n / beta`` random landmarks."""
    if not 1 <= beta <= max(g.n, 1):
        raise GraphError("need 1 <= beta <= n")
    n = g.n
    prob = C_SAMPLE * math.log(max(n, 2)) / beta
    L = sample_landmarks(n, prob, seed)
    drows = g.distances_from(L) if L.size else np.empty((0, n), dtype=np.int64)
    sub = drows[:, L] if L.size else drows
    ii, jj = np.nonzero(sub < INF)
    pairs = {(int(L[i]), int(L[j])): int(sub[i, j]) for i, j in zip(ii, jj) if i != j}
    claim = 1 if L.size == n else _cap(g, C_HOP * beta)
    return Hopset(_strip_graph_edges(g, pairs), claim, EXACT, seed, tuple(L.tolist()))


def undirected_sublinear_hopset(g: Graph, base: BaseAlgorithm, D: int,
                                mode: ApproxMode = EXACT, seed: int = 0) -> Hopset:
    """Landmarks at rate ``~log n / D``, net pairs within ``D`` minimal hops,
    ``base`` at its native hopbound on the net.  Claims ``C_HOP * beta' * D``."""
    if g.directed:
        raise GraphError("undirected_sublinear_hopset needs an undirected graph")
    if D < 1:
        raise GraphError("D must be >= 1")
    n = g.n
    L = sample_landmarks(n, C_SAMPLE * math.log(max(n, 2)) / D, seed)
    beta_net = max(1, math.floor(max(L.size, 1) ** base.b))
    pairs, _ = _net_hopset(g, base, L, D, beta_net, mode, seed)
    return Hopset(pairs, _cap(g, C_HOP * beta_net * D), mode, seed, tuple(L.tolist()))


def shortcut_folklore(g: Graph, d: int, seed: int = 0) -> Hopset:
    """Reachability shortcuts: closure pairs among ``~n log n / d`` landmarks."""
    if not g.directed:
        raise GraphError("shortcut_folklore needs a directed graph")
    if not 1 <= d <= max(g.n, 1):
        raise GraphError("need 1 <= d <= n")
    h = folklore_exact_hopset(g, d, seed)
    return Hopset(h.edges, h.beta, REACH, seed, h.landmarks)


def level_hopset(g: Graph, base: BaseAlgorithm, beta: int, mode: ApproxMode, seed: int,
                 undirected: bool = False) -> Hopset:
    """A hopset whose claimed hopbound does not exceed ``beta``.

    Uses the base algorithm directly when the target is within its native
    range, otherwise the matching sampling transform with the target shrunk
    by ``C_HOP``.
    """
    n = g.n
    target = beta // C_HOP
    if mode.kind == "reachability":
        if target < 1:
            return Hopset(base_tcw(g, REACH).edges, 1, REACH, seed)
        return shortcut_folklore(g, min(target, n), seed)
    if undirected:
        if target < 1:
            return base.construct(g, max(1, min(beta, math.floor(n ** base.b))), mode, seed)
        return undirected_sublinear_hopset(g, base, target, mode, seed)
    if target <= n ** base.b:
        return base.construct(g, max(1, min(beta, math.floor(n ** base.b))), mode, seed)
    h = sublinear_from_superlinear(g, base, target, mode, seed)
    while h.beta > beta and target > 1:
        target = max(1, target * beta // (h.beta + 1))
        if target <= n ** base.b:
            return base.construct(g, max(1, math.floor(n ** base.b)), mode, seed)
        h = sublinear_from_superlinear(g, base, target, mode, seed)
    return h
