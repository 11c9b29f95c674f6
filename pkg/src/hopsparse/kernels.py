"""Hot inner loops over CSR adjacency arrays.

Every public kernel has a numba-compiled body and a pure-numpy twin with
identical output (including tie-breaking).  Which one ``hop_layered_sssp``
and ``dijkstra_many`` dispatch to is fixed by ``hopsparse._accel``.

CSR convention: ``indptr`` (n+1, int64), ``indices`` (m, int64, sorted and
unique within a row), ``weights`` (m, int64).  Unreachable distances are
``INF``.
"""
from __future__ import annotations

import numpy as np

from ._accel import HAS_NUMBA, njit

INF = np.int64(2**62)

# Entry log produced by the hop-layered search.  Each entry records that the
# best <=h-hop distance of ``v`` improved at layer ``h``.
#   v, h, d, pred (-1 at source), edge (CSR slot, -1 at source),
#   prev (previous entry of the same vertex, -1 if none)
LOG_FIELDS = ("v", "h", "d", "pred", "edge", "prev")


@njit(cache=True)
def _grow(a, size):
    out = np.empty(max(2 * a.shape[0], size), dtype=a.dtype)
    out[: a.shape[0]] = a
    return out


@njit(cache=True)
def _hop_layered_nb(indptr, indices, weights, source, max_hops):
    n = indptr.shape[0] - 1
    dist = np.full(n, INF, dtype=np.int64)
    pred = np.full(n, -1, dtype=np.int64)
    pedge = np.full(n, -1, dtype=np.int64)
    head = np.full(n, -1, dtype=np.int64)
    touched_flag = np.zeros(n, dtype=np.bool_)

    cap = 4 * n + 16
    lv = np.empty(cap, dtype=np.int64)
    lh = np.empty(cap, dtype=np.int64)
    ld = np.empty(cap, dtype=np.int64)
    lp = np.empty(cap, dtype=np.int64)
    le = np.empty(cap, dtype=np.int64)
    lprev = np.empty(cap, dtype=np.int64)
    size = 0

    dist[source] = 0
    lv[0] = source
    lh[0] = 0
    ld[0] = 0
    lp[0] = -1
    le[0] = -1
    lprev[0] = -1
    head[source] = 0
    size = 1

    frontier = np.empty(n, dtype=np.int64)
    fvals = np.empty(n, dtype=np.int64)
    touched = np.empty(n, dtype=np.int64)
    frontier[0] = source
    nf = 1
    rounds = 0
    for h in range(1, max_hops + 1):
        if nf == 0:
            break
        rounds = h
        for i in range(nf):
            fvals[i] = dist[frontier[i]]
        nt = 0
        for i in range(nf):
            u = frontier[i]
            du = fvals[i]
            for e in range(indptr[u], indptr[u + 1]):
                v = indices[e]
                c = du + weights[e]
                if c < dist[v]:
                    dist[v] = c
                    pred[v] = u
                    pedge[v] = e
                    if not touched_flag[v]:
                        touched_flag[v] = True
                        touched[nt] = v
                        nt += 1
        tsorted = np.sort(touched[:nt])
        if size + nt > lv.shape[0]:
            lv = _grow(lv, size + nt)
            lh = _grow(lh, size + nt)
            ld = _grow(ld, size + nt)
            lp = _grow(lp, size + nt)
            le = _grow(le, size + nt)
            lprev = _grow(lprev, size + nt)
        for i in range(nt):
            v = tsorted[i]
            touched_flag[v] = False
            lv[size] = v
            lh[size] = h
            ld[size] = dist[v]
            lp[size] = pred[v]
            le[size] = pedge[v]
            lprev[size] = head[v]
            head[v] = size
            size += 1
            frontier[i] = v
        nf = nt
    if nf == 0 and rounds > 0:
        rounds -= 1
    return (dist, head, lv[:size].copy(), lh[:size].copy(), ld[:size].copy(),
            lp[:size].copy(), le[:size].copy(), lprev[:size].copy(), rounds)


def _ranges(starts, counts):
    total = int(counts.sum())
    if total == 0:
        return np.empty(0, dtype=np.int64)
    offs = np.repeat(starts - np.cumsum(counts) + counts, counts)
    return offs + np.arange(total, dtype=np.int64)


def _hop_layered_np(indptr, indices, weights, source, max_hops):
    n = indptr.shape[0] - 1
    dist = np.full(n, INF, dtype=np.int64)
    head = np.full(n, -1, dtype=np.int64)
    dist[source] = 0
    head[source] = 0
    logs = {k: [np.array([x], dtype=np.int64)] for k, x in
            zip(LOG_FIELDS, (source, 0, 0, -1, -1, -1))}
    size = 1
    frontier = np.array([source], dtype=np.int64)
    rounds = 0
    for h in range(1, max_hops + 1):
        if frontier.size == 0:
            break
        rounds = h
        starts = indptr[frontier]
        counts = indptr[frontier + 1] - starts
        e = _ranges(starts, counts)
        if e.size == 0:
            frontier = e
            break
        u = np.repeat(frontier, counts)
        c = np.repeat(dist[frontier], counts) + weights[e]
        v = indices[e]
        keep = c < dist[v]
        e, u, c, v = e[keep], u[keep], c[keep], v[keep]
        if e.size == 0:
            frontier = e
            break
        order = np.lexsort((e, c, v))
        v, c, u, e = v[order], c[order], u[order], e[order]
        first = np.ones(v.size, dtype=bool)
        first[1:] = v[1:] != v[:-1]
        v, c, u, e = v[first], c[first], u[first], e[first]
        dist[v] = c
        idx = np.arange(size, size + v.size, dtype=np.int64)
        for key, arr in zip(LOG_FIELDS, (v, np.full(v.size, h, dtype=np.int64),
                                         c, u, e, head[v])):
            logs[key].append(arr)
        head[v] = idx
        size += v.size
        frontier = v
    if frontier.size == 0 and rounds > 0:
        rounds -= 1
    out = [np.concatenate(logs[k]) for k in LOG_FIELDS]
    return (dist, head, *out, rounds)


def hop_layered_sssp(indptr, indices, weights, source, max_hops):
    """Frontier Bellman-Ford with per-layer improvement log.

    Returns ``(dist, head, v, h, d, pred, edge, prev, rounds)`` where
    ``dist`` holds the <=``max_hops``-hop distances, ``head[v]`` the index of
    the latest log entry of ``v`` and ``rounds`` the last layer at which any
    distance still improved.  At equal length fewer hops win, then the lowest
    predecessor id.
    """
    fn = _hop_layered_nb if HAS_NUMBA else _hop_layered_np
    return fn(indptr, indices, weights, np.int64(source), np.int64(max_hops))


@njit(cache=True)
def _dijkstra_many_nb(indptr, indices, weights, sources):
    n = indptr.shape[0] - 1
    out = np.full((sources.shape[0], n), INF, dtype=np.int64)
    heap_d = np.empty(indices.shape[0] + n + 1, dtype=np.int64)
    heap_v = np.empty(indices.shape[0] + n + 1, dtype=np.int64)
    done = np.zeros(n, dtype=np.bool_)
    for si in range(sources.shape[0]):
        dist = out[si]
        done[:] = False
        s = sources[si]
        dist[s] = 0
        heap_d[0] = 0
        heap_v[0] = s
        hs = 1
        while hs > 0:
            d = heap_d[0]
            u = heap_v[0]
            hs -= 1
            # sift down the last element from the root
            ld = heap_d[hs]
            lv = heap_v[hs]
            i = 0
            while True:
                c = 2 * i + 1
                if c >= hs:
                    break
                if c + 1 < hs and heap_d[c + 1] < heap_d[c]:
                    c += 1
                if heap_d[c] < ld:
                    heap_d[i] = heap_d[c]
                    heap_v[i] = heap_v[c]
                    i = c
                else:
                    break
            heap_d[i] = ld
            heap_v[i] = lv
            if done[u]:
                continue
            done[u] = True
            for e in range(indptr[u], indptr[u + 1]):
                v = indices[e]
                nd = d + weights[e]
                if nd < dist[v]:
                    dist[v] = nd
                    # sift up
                    i = hs
                    hs += 1
                    while i > 0:
                        p = (i - 1) // 2
                        if heap_d[p] > nd:
                            heap_d[i] = heap_d[p]
                            heap_v[i] = heap_v[p]
                            i = p
                        else:
                            break
                    heap_d[i] = nd
                    heap_v[i] = v
    return out


def _dijkstra_many_np(indptr, indices, weights, sources):
    n = indptr.shape[0] - 1
    out = np.full((sources.shape[0], n), INF, dtype=np.int64)
    for i, s in enumerate(sources):
        out[i] = _hop_layered_np(indptr, indices, weights, s, max(n, 1))[0]
    return out


def dijkstra_many(indptr, indices, weights, sources):
    """Exact distance rows for each source (numpy twin: unbounded frontier BF)."""
    sources = np.asarray(sources, dtype=np.int64)
    fn = _dijkstra_many_nb if HAS_NUMBA else _dijkstra_many_np
    return fn(indptr, indices, weights, sources)


def backend() -> str:
    return "numba" if HAS_NUMBA else "numpy"
