"""Brute-force reference implementations used only by the test-suite."""
from __future__ import annotations

import itertools

import networkx as nx
import numpy as np


def random_graph(rng: np.random.Generator, n: int, p: float) -> np.ndarray:
    E = np.triu(rng.random((n, n)) < p, 1)
    return E | E.T


def floyd_warshall(E: np.ndarray) -> np.ndarray:
    """All-pairs hop counts, unreachable pairs reported as N."""
    n = E.shape[0]
    D = np.where(E, 1, n * n).astype(np.int64)
    np.fill_diagonal(D, 0)
    for k in range(n):
        D = np.minimum(D, D[:, k : k + 1] + D[k : k + 1, :])
    D[D >= n] = n
    return D


def path_counts_by_walks(E: np.ndarray, D: np.ndarray) -> np.ndarray:
    """Walks of exactly dist(i, j) steps are precisely the shortest paths."""
    n = E.shape[0]
    A = E.astype(object)
    K = np.zeros((n, n), dtype=object)
    P = np.identity(n, dtype=object)
    for h in range(n):
        K[D == h] = P[D == h]
        P = P.dot(A)
    return K.astype(np.int64)


def path_counts_by_enumeration(E: np.ndarray) -> np.ndarray:
    n = E.shape[0]
    G = nx.from_numpy_array(E.astype(int))
    K = np.zeros((n, n), dtype=np.int64)
    for s, d in itertools.permutations(range(n), 2):
        lengths = [len(p) for p in nx.all_simple_paths(G, s, d)]
        if lengths:
            K[s, d] = lengths.count(min(lengths))
    np.fill_diagonal(K, 1)
    return K


def brute_importance(E: np.ndarray, L: np.ndarray, degree: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Recompute hop and path-count matrices from scratch for every feasible candidate edge."""
    n = E.shape[0]
    free = E.sum(axis=1) < degree
    D0 = floyd_warshall(E)
    K0 = path_counts_by_walks(E, D0)
    off = ~np.eye(n, dtype=bool)
    A = np.zeros((n, n), dtype=np.int64)
    B = np.zeros((n, n), dtype=np.int64)
    for i, j in itertools.combinations(range(n), 2):
        if not L[i, j] or E[i, j] or not (free[i] and free[j]):
            continue
        E2 = E.copy()
        E2[i, j] = E2[j, i] = True
        D1 = floyd_warshall(E2)
        K1 = path_counts_by_walks(E2, D1)
        same = (D1 == D0) & off
        A[i, j] = A[j, i] = int((D0 - D1)[off].sum())
        B[i, j] = B[j, i] = int((K1 - K0)[same].sum())
    return A, B


def all_paths_sorted(E: np.ndarray, s: int, d: int, max_hops: int | None, lengths: np.ndarray) -> list[tuple[int, ...]]:
    G = nx.from_numpy_array(E.astype(int))
    paths = [tuple(p) for p in nx.all_simple_paths(G, s, d, cutoff=max_hops)]
    return sorted(paths, key=lambda p: (len(p), sum(lengths[a, b] for a, b in zip(p, p[1:])), p))


def check_rwa(result, snapshot, max_hops) -> None:
    """Channel exclusivity, continuity, hop bound and the served/unserved partition."""
    n = snapshot.n
    used = set()
    for a in result.assignments:
        assert len(set(a.path)) == len(a.path), "path is not simple"
        assert {a.path[0], a.path[-1]} == set(a.request)
        if max_hops is not None:
            assert a.hops <= max_hops
        assert 1 <= a.wavelength <= result.n_lambda
        for u, v in zip(a.path, a.path[1:]):
            assert snapshot.edges[u, v], "path uses a missing link"
            key = (min(u, v), max(u, v), a.wavelength)
            assert key not in used, "channel used twice"
            used.add(key)
    served = [a.request for a in result.assignments]
    assert len(served) + len(result.unserved) == n * (n - 1) // 2
    assert {tuple(sorted(r)) for r in served + result.unserved} == set(itertools.combinations(range(n), 2))


def reference_peim(L0: np.ndarray, degree: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """Slow PEIM built on the brute-force importance oracle."""
    L = L0.copy()
    n = L.shape[0]
    E = np.zeros((n, n), dtype=bool)
    f = np.zeros(n, dtype=int)
    while L.any():
        A, B = brute_importance(E, L, degree)
        iu, ju = np.nonzero(np.triu(L, 1))
        a, b = A[iu, ju], B[iu, ju]
        top = a == a.max()
        top &= b == b[top].max()
        iu, ju = iu[top], ju[top]
        nvc = L.sum(axis=1)
        ivc = np.minimum(nvc[iu], nvc[ju])
        keep = np.flatnonzero(ivc == ivc.min())
        k = keep[0] if keep.size == 1 else keep[rng.integers(keep.size)]
        i, j = iu[k], ju[k]
        E[i, j] = E[j, i] = True
        L[i, j] = L[j, i] = False
        for v in (i, j):
            f[v] += 1
            if f[v] == degree[v]:
                L[v, :] = L[:, v] = False
    return E
