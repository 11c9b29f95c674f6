"""Brute-force checkers for every structural guarantee.

The oracles here (scipy's csgraph shortest paths, dense min-plus powers,
unweighted BFS) share no code with the construction side.  Above
``EXHAUSTIVE_LIMIT`` vertices a fixed-seed sample of pairs is checked and
the report says so.
"""
from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import shortest_path

from .graph import Graph
from .hopsets import ApproxMode, Hopset

EXHAUSTIVE_LIMIT = 256
SAMPLE_PAIRS = 10_000
_SAMPLE_SOURCES = 64


@dataclass
class VerificationReport:
    prop: str
    passed: bool = True
    pairs_checked: int = 0
    worst_stretch: float | None = None
    worst_hops: int | None = None
    worst_missing: int | None = None
    counterexample: dict | None = None
    note: str = ""

    def fail(self, u, v, observed, bound, why=""):
        if self.passed:
            self.passed = False
            self.counterexample = {"u": int(u), "v": int(v), "observed": _jsonable(observed),
                                   "bound": _jsonable(bound), "why": why}

    def observe(self, stretch=None, hops=None, missing=None):
        self.pairs_checked += 1
        if stretch is not None:
            self.worst_stretch = stretch if self.worst_stretch is None else max(self.worst_stretch, stretch)
        if hops is not None:
            self.worst_hops = hops if self.worst_hops is None else max(self.worst_hops, hops)
        if missing is not None:
            self.worst_missing = missing if self.worst_missing is None else max(self.worst_missing, missing)

    def merge(self, other: "VerificationReport") -> "VerificationReport":
        out = VerificationReport(self.prop, self.passed and other.passed,
                                 self.pairs_checked + other.pairs_checked)
        for name in ("worst_stretch", "worst_hops", "worst_missing"):
            vals = [x for x in (getattr(self, name), getattr(other, name)) if x is not None]
            setattr(out, name, max(vals) if vals else None)
        out.counterexample = self.counterexample or other.counterexample
        out.note = "; ".join(x for x in (self.note, other.note) if x)
        return out

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True)

    def to_text(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        parts = [f"{status} {self.prop}: {self.pairs_checked} pairs"]
        if self.worst_stretch is not None:
            parts.append(f"worst stretch {self.worst_stretch:.4f}")
        if self.worst_hops is not None:
            parts.append(f"worst hops {self.worst_hops}")
        if self.worst_missing is not None:
            parts.append(f"worst missing {self.worst_missing}")
        if self.counterexample:
            c = self.counterexample
            parts.append(f"counterexample ({c['u']},{c['v']}): {c['observed']} vs bound {c['bound']}"
                         + (f" [{c['why']}]" if c.get("why") else ""))
        if self.note:
            parts.append(self.note)
        return ", ".join(parts)

    def __bool__(self):
        return self.passed


def _jsonable(x):
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, float) and math.isinf(x):
        return "inf"
    if isinstance(x, (np.integer,)):
        return int(x)
    return x


# -- oracles ---------------------------------------------------------------------

def _matrix(n: int, rows: Iterable[tuple[int, int, int]], directed: bool) -> csr_matrix:
    """Sparse weight matrix; zero weights encoded as a tiny positive value."""
    best: dict[tuple[int, int], int] = {}
    for u, v, w in rows:
        if u == v:
            continue
        keys = [(u, v)] if directed else [(u, v), (v, u)]
        for key in keys:
            if w < best.get(key, math.inf):
                best[key] = w
    if not best:
        return csr_matrix((n, n))
    (us, vs), ws = zip(*best.keys()), np.array(list(best.values()), dtype=float)
    ws[ws == 0] = 1e-300
    return csr_matrix((ws, (np.array(us), np.array(vs))), shape=(n, n))


def oracle_distances(n: int, rows, directed: bool, sources=None) -> np.ndarray:
    """Exact distances (float, ``inf`` when unreachable)."""
    if n == 0:
        return np.empty((0, 0))
    mat = _matrix(n, rows, directed)
    d = shortest_path(mat, method="D", directed=directed, indices=sources)
    # zero-weight edges were encoded as 1e-300; rounding restores exact integers
    return np.round(d)


def oracle_hops(n: int, rows, directed: bool, sources=None) -> np.ndarray:
    """Unweighted hop distances."""
    mat = _matrix(n, [(u, v, 1) for u, v, _ in rows], directed)
    return shortest_path(mat, method="D", directed=directed, unweighted=True, indices=sources)


def _minplus(a: np.ndarray, b: np.ndarray, chunk: int = 32) -> np.ndarray:
    out = np.empty((a.shape[0], b.shape[1]))
    for i in range(0, a.shape[0], chunk):
        out[i:i + chunk] = np.min(a[i:i + chunk, :, None] + b[None, :, :], axis=1)
    return out


def oracle_hop_bounded(n: int, rows, directed: bool, beta: int) -> np.ndarray:
    """Dense ``dist^{(beta)}`` by repeated min-plus squaring."""
    a = np.full((n, n), np.inf)
    np.fill_diagonal(a, 0.0)
    for u, v, w in rows:
        if u != v:
            a[u, v] = min(a[u, v], w)
            if not directed:
                a[v, u] = min(a[v, u], w)
    result = np.full((n, n), np.inf)
    np.fill_diagonal(result, 0.0)
    base = a
    e = max(0, int(beta))
    while e:
        if e & 1:
            result = _minplus(result, base)
        e >>= 1
        if e:
            base = _minplus(base, base)
    return result


def _hop_bounded_rows(n, rows, directed, beta, sources):
    """Per-source layered relaxation over an edge array (sampled mode)."""
    src, dst, w = [], [], []
    for u, v, x in rows:
        src.append(u); dst.append(v); w.append(x)
        if not directed:
            src.append(v); dst.append(u); w.append(x)
    src, dst, w = np.array(src, dtype=np.int64), np.array(dst, dtype=np.int64), np.array(w, dtype=float)
    out = np.full((len(sources), n), np.inf)
    for i, s in enumerate(sources):
        d = np.full(n, np.inf)
        d[s] = 0.0
        for _ in range(int(beta)):
            nd = d.copy()
            np.minimum.at(nd, dst, d[src] + w)
            if np.array_equal(nd, d):
                break
            d = nd
        out[i] = d
    return out


def _pairs_plan(n: int, seed: int = 0):
    """Sources and per-source targets: everything when small, a sample otherwise."""
    if n <= EXHAUSTIVE_LIMIT:
        return list(range(n)), None, ""
    rng = np.random.default_rng(seed)
    srcs = sorted(rng.choice(n, size=min(n, _SAMPLE_SOURCES), replace=False).tolist())
    per = math.ceil(SAMPLE_PAIRS / len(srcs))
    targets = {s: rng.choice(n, size=min(n, per), replace=False) for s in srcs}
    return srcs, targets, f"sampled {per * len(srcs)} pairs (n > {EXHAUSTIVE_LIMIT})"


def _le(observed, alpha: Fraction, base, beta_add) -> bool:
    """``observed <= alpha * base + beta_add`` in exact arithmetic."""
    if math.isinf(observed):
        return False
    return Fraction(int(observed)) <= alpha * int(base) + beta_add


# -- checkers --------------------------------------------------------------------

def check_hopset(g: Graph, h: Hopset, beta_claim: int, mode: ApproxMode | None = None,
                 seed: int = 0) -> VerificationReport:
    mode = mode or h.mode
    rep = VerificationReport(f"hopset(beta={beta_claim}, {mode})")
    g_rows = g.edges()
    all_rows = g_rows + [(u, v, w) for (u, v), w in h.edges.items()]
    srcs, targets, rep.note = _pairs_plan(g.n, seed)
    exact = oracle_distances(g.n, g_rows, g.directed, srcs)
    if targets is None:
        bounded = oracle_hop_bounded(g.n, all_rows, g.directed, beta_claim)
    else:
        bounded = _hop_bounded_rows(g.n, all_rows, g.directed, beta_claim, srcs)
    for i, u in enumerate(srcs):
        vs = range(g.n) if targets is None else targets[u]
        for v in vs:
            v = int(v)
            d = exact[i, v]
            if u == v or math.isinf(d):
                continue
            db = bounded[u if targets is None else i, v]
            rep.observe(stretch=None if math.isinf(db) or d == 0 else db / d)
            if db < d:
                rep.fail(u, v, db, d, "hop-bounded distance below true distance")
            elif mode.kind == "reachability":
                if math.isinf(db):
                    rep.fail(u, v, db, beta_claim, f"no path within {beta_claim} hops")
            elif not _le(db, mode.stretch, d, 0):
                rep.fail(u, v, db, mode.stretch * int(d))
    return rep


def check_shortcut(g: Graph, h: Hopset, d_claim: int, seed: int = 0) -> VerificationReport:
    rep = VerificationReport(f"shortcut(d={d_claim})")
    srcs, targets, rep.note = _pairs_plan(g.n, seed)
    reach = oracle_hops(g.n, g.edges(), g.directed, srcs)
    hops = oracle_hops(g.n, g.edges() + [(u, v, 1) for u, v in h.edges], g.directed, srcs)
    for i, u in enumerate(srcs):
        vs = range(g.n) if targets is None else targets[u]
        for v in vs:
            v = int(v)
            if u == v or math.isinf(reach[i, v]):
                continue
            x = hops[i, v]
            rep.observe(hops=int(x) if not math.isinf(x) else None)
            if x > d_claim:
                rep.fail(u, v, x, d_claim)
    return rep


def check_missing_spanner(g: Graph, ms, seed: int = 0) -> VerificationReport:
    rep = VerificationReport(f"missing-spanner(r={ms.r}, t={ms.t})")
    weights = {}
    for u, v, w in g.edges():
        weights[(u, v)] = w
        if not g.directed:
            weights[(v, u)] = w
    for key in ms.g_prime:
        if key not in weights:
            rep.fail(key[0], key[1], "edge", "E(G)", "G' edge not in G")
            return rep
    gp = set(ms.g_prime)
    if not g.directed:
        gp |= {(v, u) for u, v in ms.g_prime}
    bound = sum(len(h) * ms.schedule.beta(i) for i, h in enumerate(ms.hierarchy, 1))
    if ms.hierarchy and len(ms.g_prime) > bound:
        rep.fail(-1, -1, len(ms.g_prime), bound, "size bound violated")
    srcs, targets, rep.note = _pairs_plan(g.n, seed)
    exact = oracle_distances(g.n, g.edges(), g.directed, srcs)
    for i, u in enumerate(srcs):
        vs = range(g.n) if targets is None else targets[u]
        for v in vs:
            v = int(v)
            d = exact[i, v]
            if u == v or math.isinf(d):
                continue
            wp = ms.witness_path(u, v)
            verts = wp.vertices
            if verts[0] != u or verts[-1] != v:
                rep.fail(u, v, verts, "endpoints", "witness endpoints wrong")
                continue
            length = 0
            missing = 0
            ok = True
            for a, b in zip(verts, verts[1:]):
                w = weights.get((a, b))
                if w is None:
                    rep.fail(u, v, (a, b), "E(G)", "witness uses a non-graph edge")
                    ok = False
                    break
                length += w
                missing += (a, b) not in gp
            if not ok:
                continue
            rep.observe(stretch=length / d if d else 1.0, hops=len(verts) - 1, missing=missing)
            if missing > ms.r:
                rep.fail(u, v, missing, ms.r, "too many missing edges")
            elif ms.t is not None and not _le(length, ms.t, d, 0):
                rep.fail(u, v, length, ms.t * int(d), "witness too long")
    return rep


@dataclass(frozen=True)
class AllPairs:
    pass


@dataclass(frozen=True)
class Pairs:
    pairs: tuple


@dataclass(frozen=True)
class Sourcewise:
    sources: tuple


@dataclass(frozen=True)
class Slack:
    eps: float


def check_stretch(g: Graph, result, scope=AllPairs(), alpha=None, beta_add=0,
                  seed: int = 0) -> VerificationReport:
    """``dist_result(u, v) <= alpha * dist_G(u, v) + beta_add`` over the scope.

    ``result`` is a :class:`~hopsparse.derived.SubgraphResult` or a plain
    iterable of ``(u, v, w)`` rows.  ``alpha=None`` (or a result with
    ``alpha=None`` and no override) checks reachability only.
    """
    if hasattr(result, "edges") and isinstance(result.edges, dict):
        rows = [(u, v, w) for (u, v), w in result.edges.items()]
        if alpha is None:
            alpha = result.alpha
            beta_add = beta_add or result.beta_add
    else:
        rows = list(result)
    alpha = None if alpha is None else Fraction(alpha)
    beta_add = Fraction(beta_add)
    name = "reachability" if alpha is None else f"stretch(alpha={alpha}, beta={beta_add})"
    rep = VerificationReport(f"{name} {type(scope).__name__}")
    n = g.n
    if isinstance(scope, Pairs):
        by_src: dict[int, list[int]] = {}
        for u, v in scope.pairs:
            by_src.setdefault(int(u), []).append(int(v))
        srcs = sorted(by_src)
        targets = by_src
    elif isinstance(scope, Sourcewise):
        srcs = sorted(set(int(s) for s in scope.sources))
        targets = None
    else:
        srcs, targets, rep.note = _pairs_plan(n, seed)
    if not srcs:
        return rep
    dg = oracle_distances(n, g.edges(), g.directed, srcs)
    dr = oracle_distances(n, rows, g.directed, srcs)
    for i, u in enumerate(srcs):
        if isinstance(scope, Slack):
            order = np.lexsort((np.arange(n), dg[i]))
            vs = order[math.floor(scope.eps * n + 1e-9):]
        else:
            vs = range(n) if targets is None else targets[u]
        for v in vs:
            v = int(v)
            d = dg[i, v]
            if u == v or math.isinf(d):
                continue
            x = dr[i, v]
            if alpha is None:
                rep.observe()
                if math.isinf(x):
                    rep.fail(u, v, x, "reachable")
                continue
            rep.observe(stretch=(x / d) if d else (1.0 if x == 0 else math.inf))
            if not _le(x, alpha, d, beta_add):
                rep.fail(u, v, x, alpha * int(d) + beta_add)
    return rep


def check_density_net(g: Graph, net) -> VerificationReport:
    """Size bound, 2R coverage and pairwise-disjoint balls of a density net."""
    rep = VerificationReport(f"density-net(eps={net.eps})")
    n = g.n
    d = oracle_distances(n, g.edges(), g.directed)
    rank = max(1, math.ceil(net.eps * n - 1e-9))
    radius = np.sort(d, axis=1)[:, rank - 1]
    limit = math.ceil(1 / net.eps - 1e-9)
    if len(net.net) > limit:
        rep.fail(-1, -1, len(net.net), limit, "net too large")
    for x in range(n):
        rep.observe()
        if not net.net or min(d[x, y] for y in net.net) > 2 * radius[x]:
            rep.fail(x, -1, min((d[x, y] for y in net.net), default=math.inf), 2 * radius[x],
                     "not covered")
    for i, x in enumerate(net.net):
        for y in net.net[i + 1:]:
            if d[x, y] <= radius[x] + radius[y]:
                rep.fail(x, y, d[x, y], radius[x] + radius[y], "balls intersect")
    return rep


def brute_force_girth(n: int, edges: Iterable[tuple[int, int]]) -> float:
    """Shortest cycle length (in edges) of an undirected simple graph via BFS from every vertex."""
    adj = [[] for _ in range(n)]
    for u, v in edges:
        adj[u].append(v)
        adj[v].append(u)
    best = math.inf
    for s in range(n):
        dist = {s: 0}
        parent = {s: -1}
        queue = [s]
        for x in queue:
            for y in adj[x]:
                if y not in dist:
                    dist[y] = dist[x] + 1
                    parent[y] = x
                    queue.append(y)
                elif parent[x] != y:
                    best = min(best, dist[x] + dist[y] + 1)
    return best
