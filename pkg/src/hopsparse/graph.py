"""Integer-weighted graphs, pair sets, generators and edge-list I/O."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .kernels import INF, dijkstra_many


class GraphError(ValueError):
    """Raised for domain violations (bad ids, negative weights, ...)."""


class ParseError(GraphError):
    def __init__(self, lineno: int, msg: str):
        super().__init__(f"line {lineno}: {msg}")
        self.lineno = lineno


# path lengths must stay below the INF sentinel
_MAX_TOTAL = 2**61


def _collapse(n, src, dst, w, directed):
    src = np.asarray(src, dtype=np.int64)
    dst = np.asarray(dst, dtype=np.int64)
    w = np.asarray(w, dtype=np.int64)
    if src.size:
        if src.min() < 0 or dst.min() < 0 or src.max() >= n or dst.max() >= n:
            raise GraphError("vertex id out of range")
        if w.min() < 0:
            raise GraphError("negative edge weight")
    keep = src != dst
    src, dst, w = src[keep], dst[keep], w[keep]
    if not directed:
        lo, hi = np.minimum(src, dst), np.maximum(src, dst)
        src, dst = lo, hi
    order = np.lexsort((w, dst, src))
    src, dst, w = src[order], dst[order], w[order]
    first = np.ones(src.size, dtype=bool)
    first[1:] = (src[1:] != src[:-1]) | (dst[1:] != dst[:-1])
    return src[first], dst[first], w[first]


class Graph:
    """Immutable weighted graph on vertices ``0..n-1``.

    Undirected edges are stored once with ``u < v``.  Parallel edges keep the
    minimum weight and self-loops are dropped.
    """

    def __init__(self, n: int, edges: Iterable[tuple[int, int, int]] = (),
                 directed: bool = True):
        if n < 0:
            raise GraphError("negative vertex count")
        edges = list(edges)
        if edges:
            src, dst, w = (np.array(col, dtype=np.int64) for col in zip(*edges))
        else:
            src = dst = w = np.empty(0, dtype=np.int64)
        self._init(n, src, dst, w, directed)

    @classmethod
    def from_arrays(cls, n, src, dst, w, directed=True) -> "Graph":
        g = cls.__new__(cls)
        g._init(n, src, dst, w, directed)
        return g

    def _init(self, n, src, dst, w, directed):
        self.n = int(n)
        self.directed = bool(directed)
        self.src, self.dst, self.w = _collapse(self.n, src, dst, w, self.directed)
        for a in (self.src, self.dst, self.w):
            a.setflags(write=False)
        self.w_max = int(self.w.max()) if self.w.size else 0
        if self.w_max * max(self.n, 1) >= _MAX_TOTAL:
            raise GraphError("n * W_max too large for 64-bit path lengths")

    # -- basic views -------------------------------------------------------
    @property
    def m(self) -> int:
        return int(self.src.size)

    def edges(self) -> list[tuple[int, int, int]]:
        return list(zip(self.src.tolist(), self.dst.tolist(), self.w.tolist()))

    def edge_key(self, u: int, v: int) -> tuple[int, int]:
        if self.directed or u < v:
            return (u, v)
        return (v, u)

    @cached_property
    def weight_map(self) -> dict[tuple[int, int], int]:
        return {(u, v): w for u, v, w in self.edges()}

    def weight(self, u: int, v: int) -> int | None:
        return self.weight_map.get(self.edge_key(u, v))

    def has_edge(self, u: int, v: int) -> bool:
        return self.edge_key(u, v) in self.weight_map

    @cached_property
    def csr(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Out-adjacency (both directions for undirected graphs)."""
        return build_csr(self.n, self.src, self.dst, self.w, self.directed)

    def neighbors(self, u: int) -> np.ndarray:
        indptr, indices, _ = self.csr
        return indices[indptr[u]:indptr[u + 1]]

    def subgraph(self, keys: Iterable[tuple[int, int]]) -> "Graph":
        """Edge-induced subgraph keeping this graph's weights."""
        wm = self.weight_map
        rows = [(u, v, wm[(u, v)]) for u, v in keys]
        return Graph(self.n, rows, directed=self.directed)

    def edge_keys(self) -> set[tuple[int, int]]:
        return set(self.weight_map)

    def distances_from(self, sources: Sequence[int]) -> np.ndarray:
        indptr, indices, w = self.csr
        return dijkstra_many(indptr, indices, w, np.asarray(sources, dtype=np.int64))

    def serialize(self) -> str:
        head = f"# n={self.n} directed={int(self.directed)}\n"
        return head + "".join(f"{u} {v} {w}\n" for u, v, w in self.edges())

    def __eq__(self, other):
        return (isinstance(other, Graph) and self.n == other.n
                and self.directed == other.directed
                and np.array_equal(self.src, other.src)
                and np.array_equal(self.dst, other.dst)
                and np.array_equal(self.w, other.w))

    def __repr__(self):
        kind = "directed" if self.directed else "undirected"
        return f"Graph(n={self.n}, m={self.m}, {kind}, W_max={self.w_max})"


def build_csr(n, src, dst, w, directed):
    src = np.asarray(src, dtype=np.int64)
    dst = np.asarray(dst, dtype=np.int64)
    w = np.asarray(w, dtype=np.int64)
    if not directed:
        src, dst, w = (np.concatenate([src, dst]), np.concatenate([dst, src]),
                       np.concatenate([w, w]))
    order = np.lexsort((dst, src))
    src, dst, w = src[order], dst[order], w[order]
    indptr = np.zeros(n + 1, dtype=np.int64)
    np.add.at(indptr, src + 1, 1)
    np.cumsum(indptr, out=indptr)
    return indptr, dst.copy(), w.copy()


@dataclass(frozen=True)
class PairSet:
    """Ordered demand pairs, deduplicated, first-seen order kept."""

    pairs: tuple[tuple[int, int], ...]

    @classmethod
    def of(cls, pairs: Iterable[tuple[int, int]], n: int | None = None) -> "PairSet":
        seen = {}
        for u, v in pairs:
            u, v = int(u), int(v)
            if n is not None and not (0 <= u < n and 0 <= v < n):
                raise GraphError(f"pair ({u}, {v}) out of range")
            seen.setdefault((u, v), None)
        return cls(tuple(seen))

    @property
    def p(self) -> int:
        return len(self.pairs)

    def __iter__(self):
        return iter(self.pairs)

    def __len__(self):
        return len(self.pairs)


def sample_pairs(g: "Graph", p: int, seed: int = 0, reachable: bool = True) -> PairSet:
    """``p`` distinct ordered pairs ``u != v`` drawn uniformly, optionally from ``TC(G)`` only."""
    rng = np.random.default_rng(seed)
    if reachable:
        d = g.distances_from(np.arange(g.n))
        cand = np.argwhere((d < INF) & ~np.eye(g.n, dtype=bool))
    else:
        cand = np.argwhere(~np.eye(g.n, dtype=bool))
    if p > len(cand):
        raise GraphError(f"only {len(cand)} candidate pairs for p={p}")
    pick = np.sort(rng.choice(len(cand), size=p, replace=False))
    return PairSet.of(map(tuple, cand[pick]), g.n)


GENERATOR_KINDS = ("gnp", "random-dag", "path", "cycle", "grid", "layered")


@dataclass(frozen=True)
class GeneratorSpec:
    """Parameters for :func:`generate_graph`.

    ``density`` is the edge probability for ``gnp``/``random-dag``;
    ``window`` restricts ``random-dag`` edges to ``j - i <= window`` (0 means
    unrestricted); ``layers`` is used by ``layered`` and ``grid`` (rows).
    """

    kind: str
    n: int
    density: float = 0.1
    weight_range: tuple[int, int] = (1, 1)
    seed: int = 0
    directed: bool = True
    window: int = 0
    layers: int = 4


def _weights(rng, lo, hi, size):
    return rng.integers(lo, hi + 1, size=size, dtype=np.int64)


def generate_graph(spec: GeneratorSpec) -> Graph:
    n = spec.n
    if n <= 0:
        raise GraphError("n must be positive")
    if spec.kind not in GENERATOR_KINDS:
        raise GraphError(f"unknown generator kind {spec.kind!r}")
    lo, hi = spec.weight_range
    if not 0 <= lo <= hi:
        raise GraphError("bad weight range")
    rng = np.random.default_rng(spec.seed)
    kind = spec.kind
    directed = spec.directed
    if kind == "path":
        src = np.arange(n - 1)
        dst = src + 1
    elif kind == "cycle":
        src = np.arange(n)
        dst = (src + 1) % n
        if n < 3:
            src, dst = src[: n - 1], dst[: n - 1]
    elif kind == "grid":
        rows = max(1, spec.layers)
        cols = math.ceil(n / rows)
        src, dst = [], []
        for x in range(n):
            if (x % cols) + 1 < cols and x + 1 < n:
                src.append(x)
                dst.append(x + 1)
            if x + cols < n:
                src.append(x)
                dst.append(x + cols)
        src, dst = np.array(src, dtype=np.int64), np.array(dst, dtype=np.int64)
    elif kind == "gnp":
        if directed:
            mask = rng.random((n, n)) < spec.density
            np.fill_diagonal(mask, False)
        else:
            mask = np.triu(rng.random((n, n)) < spec.density, k=1)
        src, dst = np.nonzero(mask)
    elif kind == "random-dag":
        mask = np.triu(rng.random((n, n)) < spec.density, k=1)
        if spec.window > 0:
            i, j = np.indices((n, n))
            mask &= (j - i) <= spec.window
        src, dst = np.nonzero(mask)
        directed = True
    else:  # layered
        layers = max(1, min(spec.layers, n))
        bounds = np.linspace(0, n, layers + 1).astype(np.int64)
        src, dst = [], []
        for a in range(layers - 1):
            left = np.arange(bounds[a], bounds[a + 1])
            right = np.arange(bounds[a + 1], bounds[a + 2])
            mask = rng.random((left.size, right.size)) < spec.density
            s, d = np.nonzero(mask)
            src.append(left[s])
            dst.append(right[d])
        src = np.concatenate(src) if src else np.empty(0, dtype=np.int64)
        dst = np.concatenate(dst) if dst else np.empty(0, dtype=np.int64)
        directed = True
    src = np.asarray(src, dtype=np.int64)
    dst = np.asarray(dst, dtype=np.int64)
    w = _weights(rng, lo, hi, src.size)
    return Graph.from_arrays(n, src, dst, w, directed=directed)


def load_graph(path: str | Path, fmt: str = "edge-list", directed: bool = True,
               n: int | None = None) -> Graph:
    """Read an edge list (``u v w`` per line, ``#`` comments) or DIMACS ``.gr``.

    DIMACS ids are 1-based and always directed.  For edge lists ``n`` defaults
    to one past the largest id, or to a ``# n=<n>`` header when present.
    """
    text = Path(path).read_text()
    return parse_graph(text, fmt=fmt, directed=directed, n=n)


def parse_graph(text: str, fmt: str = "edge-list", directed: bool = True,
                n: int | None = None) -> Graph:
    rows = []
    if fmt == "dimacs-gr":
        declared = None
        for lineno, raw in enumerate(text.splitlines(), 1):
            parts = raw.split()
            if not parts or parts[0] == "c":
                continue
            if parts[0] == "p":
                if len(parts) != 4 or parts[1] != "sp":
                    raise ParseError(lineno, "expected 'p sp <n> <m>'")
                declared = _int(parts[2], lineno)
            elif parts[0] == "a":
                if declared is None:
                    raise ParseError(lineno, "arc before problem line")
                if len(parts) != 4:
                    raise ParseError(lineno, "expected 'a <u> <v> <w>'")
                u, v, w = (_int(x, lineno) for x in parts[1:])
                if w < 0:
                    raise GraphError(f"line {lineno}: negative weight {w}")
                if not (1 <= u <= declared and 1 <= v <= declared):
                    raise ParseError(lineno, "vertex id out of range")
                rows.append((u - 1, v - 1, w))
            else:
                raise ParseError(lineno, f"unknown record {parts[0]!r}")
        if declared is None:
            raise ParseError(0, "missing problem line")
        return Graph(declared, rows, directed=True)
    if fmt != "edge-list":
        raise GraphError(f"unknown format {fmt!r}")
    header_n = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if line.startswith("#"):
            for tok in line[1:].split():
                if tok.startswith("n="):
                    header_n = _int(tok[2:], lineno)
                elif tok.startswith("directed="):
                    directed = tok[9:] not in ("0", "false")
            continue
        if not line:
            continue
        parts = line.split()
        if len(parts) not in (2, 3):
            raise ParseError(lineno, f"expected 'u v [w]', got {line!r}")
        u, v = _int(parts[0], lineno), _int(parts[1], lineno)
        w = _int(parts[2], lineno) if len(parts) == 3 else 1
        if u < 0 or v < 0:
            raise ParseError(lineno, "negative vertex id")
        if w < 0:
            raise GraphError(f"line {lineno}: negative weight {w}")
        rows.append((u, v, w))
    if n is None:
        n = header_n
    if n is None:
        n = 1 + max((max(u, v) for u, v, _ in rows), default=-1)
    return Graph(n, rows, directed=directed)


def _int(tok: str, lineno: int) -> int:
    try:
        return int(tok)
    except ValueError:
        raise ParseError(lineno, f"not an integer: {tok!r}") from None


def save_graph(g: Graph, path: str | Path) -> None:
    Path(path).write_text(g.serialize())


@dataclass
class WeightedClosure:
    """Reachable ordered pairs ``(u, v)``, ``u != v``, with ``dist_G(u, v)``."""

    pairs: PairSet
    dist: dict[tuple[int, int], int] = field(repr=False)

    def __len__(self):
        return self.pairs.p


def transitive_closure(g: Graph) -> WeightedClosure:
    """Weighted transitive closure TC_W(G) via one Dijkstra per vertex.

    For undirected graphs both orientations of each pair are listed.
    """
    d = g.distances_from(range(g.n)) if g.n else np.empty((0, 0), dtype=np.int64)
    us, vs = np.nonzero(d < INF)
    keep = us != vs
    us, vs = us[keep], vs[keep]
    vals = d[us, vs]
    dist = dict(zip(zip(us.tolist(), vs.tolist()), vals.tolist()))
    return WeightedClosure(PairSet(tuple(dist)), dist)
