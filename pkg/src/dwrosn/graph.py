"""All-pairs hop counts and shortest-path multiplicities on unit-weight graphs."""
from __future__ import annotations

import numpy as np
from numba import njit


@njit(cache=True)
def _bfs_all_pairs(adj):
    n = adj.shape[0]
    deg = np.zeros(n, dtype=np.int64)
    for v in range(n):
        for w in range(n):
            if adj[v, w]:
                deg[v] += 1
    start = np.zeros(n + 1, dtype=np.int64)
    for v in range(n):
        start[v + 1] = start[v] + deg[v]
    nbr = np.empty(start[n], dtype=np.int64)
    pos = start[:-1].copy()
    for v in range(n):
        for w in range(n):
            if adj[v, w]:
                nbr[pos[v]] = w
                pos[v] += 1

    hops = np.full((n, n), n, dtype=np.int64)
    counts = np.zeros((n, n), dtype=np.int64)
    queue = np.empty(n, dtype=np.int64)
    for s in range(n):
        dist = hops[s]
        cnt = counts[s]
        dist[s] = 0
        cnt[s] = 1
        queue[0] = s
        head, tail = 0, 1
        while head < tail:
            v = queue[head]
            head += 1
            for e in range(start[v], start[v + 1]):
                w = nbr[e]
                if dist[w] == n:
                    dist[w] = dist[v] + 1
                    cnt[w] = cnt[v]
                    queue[tail] = w
                    tail += 1
                elif dist[w] == dist[v] + 1:
                    cnt[w] += cnt[v]
    return hops, counts


def hops_and_counts(edges) -> tuple[np.ndarray, np.ndarray]:
    """Hop matrix (unreachable = N) and number of distinct minimum-hop paths per pair."""
    adj = np.ascontiguousarray(getattr(edges, "edges", edges), dtype=np.bool_)
    return _bfs_all_pairs(adj)


def hop_matrix(snapshot) -> np.ndarray:
    return hops_and_counts(snapshot)[0]


def shortest_path_counts(snapshot) -> np.ndarray:
    return hops_and_counts(snapshot)[1]


@njit(cache=True)
def _edge_gains(hops, counts, ci, cj):
    # Adding (i, j) can only shorten or tie k -> n when k is strictly closer to one
    # endpoint and n strictly closer to the other; the two directions mirror each other.
    n = hops.shape[0]
    m = ci.shape[0]
    gain_a = np.zeros(m, dtype=np.int64)
    gain_b = np.zeros(m, dtype=np.int64)
    near_i = np.empty(n, dtype=np.int64)
    near_j = np.empty(n, dtype=np.int64)
    for c in range(m):
        i = ci[c]
        j = cj[c]
        ni = 0
        nj = 0
        for v in range(n):
            hi = hops[v, i]
            hj = hops[v, j]
            if hi + 1 <= hj:
                near_i[ni] = v
                ni += 1
            elif hj + 1 <= hi:
                near_j[nj] = v
                nj += 1
        a = 0
        b = 0
        for x in range(ni):
            k = near_i[x]
            hki = hops[k, i]
            kki = counts[k, i]
            for y in range(nj):
                t = near_j[y]
                via = hki + 1 + hops[j, t]
                old = hops[k, t]
                if via < old:
                    a += old - via
                elif via == old:
                    b += kki * counts[j, t]
        gain_a[c] = 2 * a
        gain_b[c] = 2 * b
    return gain_a, gain_b


def edge_gains(hops: np.ndarray, counts: np.ndarray, ci, cj) -> tuple[np.ndarray, np.ndarray]:
    """Per candidate edge (ci[c], cj[c]): total hop decrease and extra equal-length paths,
    summed over ordered node pairs, with unreachable pairs charged the sentinel N."""
    ci = np.ascontiguousarray(ci, dtype=np.int64)
    cj = np.ascontiguousarray(cj, dtype=np.int64)
    return _edge_gains(hops, counts, ci, cj)
