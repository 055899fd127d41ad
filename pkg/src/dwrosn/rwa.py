"""Routing and wavelength assignment under wavelength continuity (first fit)."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .graph import hop_matrix
from .metrics import connectivity
from .orbital import ConstellationSpec, positions

SPEED_OF_LIGHT_KM_S = 299792.458
PROCESSING_MS = 10.0

Path = tuple[int, ...]


def link_lengths(spec: ConstellationSpec | None, n: int, tau: float | None) -> np.ndarray:
    """Pairwise distances (km) at ``tau``; zeros when no geometry is available."""
    if spec is None or tau is None:
        return np.zeros((n, n))
    pos = positions(spec, tau)
    return np.linalg.norm(pos[:, None] - pos[None, :], axis=-1)


def path_delay(path, spec: ConstellationSpec, tau: float, per_hop_processing: float = PROCESSING_MS) -> float:
    """Propagation plus per-hop processing delay in milliseconds."""
    if len(path) < 2:
        raise ValueError("a path needs at least one hop")
    pos = positions(spec, tau)
    idx = np.asarray(path)
    km = np.linalg.norm(pos[idx[1:]] - pos[idx[:-1]], axis=1).sum()
    return float(km / SPEED_OF_LIGHT_KM_S * 1000.0 + (len(path) - 1) * per_hop_processing)


def _paths_of_length(adj, to_dst, s, d, length):
    out = []
    path = [s]
    on_path = {s}

    def walk(v, used):
        if v == d:
            if used == length:
                out.append(tuple(path))
            return
        for w in adj[v]:
            if w in on_path or used + 1 + to_dst[w] > length:
                continue
            path.append(w)
            on_path.add(w)
            walk(w, used + 1)
            path.pop()
            on_path.discard(w)

    walk(s, 0)
    return out


def enumerate_candidate_paths(
    snapshot,
    s: int,
    d: int,
    max_hops: int | None = None,
    k_cap: int | None = 16,
    spec: ConstellationSpec | None = None,
    eval_time: float | None = None,
    *,
    hops: np.ndarray | None = None,
    lengths: np.ndarray | None = None,
) -> list[Path]:
    """Up to ``k_cap`` simple s-d paths of at most ``max_hops`` hops, shortest first.

    Paths are ordered by hop count, then by link length summed at ``eval_time``
    (equivalently transmission delay, since processing is per hop), then by node
    sequence. Hop levels are enumerated in increasing order and the search stops
    once a level brings the total to ``k_cap``.
    """
    if s == d:
        raise ValueError("source and destination must differ")
    if k_cap is not None and k_cap < 1:
        raise ValueError("k_cap must be at least 1")
    n = snapshot.n
    H = hop_matrix(snapshot) if hops is None else hops
    if lengths is None:
        lengths = link_lengths(spec, n, eval_time if eval_time is not None else snapshot.slot_start)
    if H[s, d] >= n:
        return []
    adj = snapshot.neighbors()
    to_dst = H[:, d].tolist()
    top = n - 1 if max_hops is None else min(max_hops, n - 1)
    found: list[Path] = []
    for length in range(int(H[s, d]), top + 1):
        found += _paths_of_length(adj, to_dst, s, d, length)
        if k_cap is not None and len(found) >= k_cap:
            break
    found.sort(key=lambda p: (len(p), sum(lengths[a, b] for a, b in zip(p, p[1:])), p))
    return found[:k_cap] if k_cap is not None else found


def route_table(snapshot, max_hops=None, k_cap=16, spec=None, eval_time=None) -> dict[tuple[int, int], list[Path]]:
    """Candidate paths for every unordered pair (s < d)."""
    n = snapshot.n
    H = hop_matrix(snapshot)
    lengths = link_lengths(spec, n, eval_time if eval_time is not None else snapshot.slot_start)
    return {
        (s, d): enumerate_candidate_paths(snapshot, s, d, max_hops, k_cap, hops=H, lengths=lengths)
        for s in range(n)
        for d in range(s + 1, n)
    }


def _edges_of(path):
    return [(a, b) if a < b else (b, a) for a, b in zip(path, path[1:])]


class WavelengthState:
    """Per-link occupancy bitmask over wavelength indices 1..n_lambda."""

    def __init__(self, edges, n_lambda: int = 1):
        self.masks: dict[tuple[int, int], int] = {tuple(sorted(e)): 0 for e in edges}
        self.n_lambda = n_lambda

    def free_mask(self, path) -> int:
        used = 0
        for e in _edges_of(path):
            used |= self.masks[e]
        return ~used & ((1 << self.n_lambda) - 1)

    def is_free(self, path, wavelength: int) -> bool:
        return bool(self.free_mask(path) >> (wavelength - 1) & 1)

    def occupy(self, path, wavelength: int) -> None:
        bit = 1 << (wavelength - 1)
        for e in _edges_of(path):
            if self.masks[e] & bit:
                raise ValueError(f"wavelength {wavelength} already used on link {e}")
            self.masks[e] |= bit

    def load(self) -> dict[tuple[int, int], int]:
        return {e: bin(m).count("1") for e, m in self.masks.items()}


def first_fit(paths, state: WavelengthState):
    """First (path, wavelength) in path-major, wavelength-minor order with every link free.

    Returns ``None`` when no current wavelength fits any path.
    """
    for path in paths:
        free = state.free_mask(path)
        if free:
            return path, (free & -free).bit_length()
    return None


@dataclass(frozen=True)
class RouteAssignment:
    request: tuple[int, int]
    path: Path
    wavelength: int
    propagation_ms: float = math.nan
    processing_ms: float = math.nan

    @property
    def hops(self) -> int:
        return len(self.path) - 1

    @property
    def delay_ms(self) -> float:
        return self.propagation_ms + self.processing_ms


@dataclass
class RwaResult:
    assignments: list[RouteAssignment]
    unserved: list[tuple[int, int]]
    n_lambda: int
    beta: float
    max_hops: int | None = None
    order: list[tuple[int, int]] = field(default_factory=list, repr=False)

    def mean_delay_ms(self) -> float:
        return float(np.mean([a.delay_ms for a in self.assignments])) if self.assignments else math.nan


def rwa_run(
    snapshot,
    max_hops: int | None,
    k_cap: int | None,
    eval_time: float | None,
    rng: np.random.Generator,
    spec: ConstellationSpec | None = None,
    routes: dict[tuple[int, int], list[Path]] | None = None,
    per_hop_processing: float = PROCESSING_MS,
) -> RwaResult:
    """Serve every node pair once, in random order, on the first fitting wavelength.

    ``routes`` may be a precomputed :func:`route_table` built with an equal or
    larger hop limit; it is filtered down to ``max_hops`` here.
    """
    n = snapshot.n
    if eval_time is None:
        eval_time = snapshot.slot_start
    if routes is None:
        routes = route_table(snapshot, max_hops, k_cap, spec, eval_time)
    lengths = link_lengths(spec, n, eval_time) if spec is not None else None
    requests = [(s, d) for s in range(n) for d in range(s + 1, n)]
    order = [requests[k] for k in rng.permutation(len(requests))]
    state = WavelengthState(snapshot.edge_list())
    assignments, unserved = [], []
    for req in order:
        paths = routes[req]
        if max_hops is not None:
            paths = [p for p in paths if len(p) - 1 <= max_hops]
        if k_cap is not None:
            paths = paths[:k_cap]
        if not paths:
            unserved.append(req)
            continue
        fit = first_fit(paths, state)
        if fit is None:
            state.n_lambda += 1
            fit = paths[0], state.n_lambda
        path, lam = fit
        state.occupy(path, lam)
        if lengths is not None:
            km = sum(lengths[a, b] for a, b in zip(path, path[1:]))
            prop = float(km / SPEED_OF_LIGHT_KM_S * 1000.0)
            proc = (len(path) - 1) * per_hop_processing
        else:
            prop = proc = math.nan
        assignments.append(RouteAssignment(req, path, lam, prop, proc))
    beta = connectivity(snapshot, max_hops)
    return RwaResult(assignments, unserved, state.n_lambda, beta, max_hops, order)


def delay_series(
    result: RwaResult, spec: ConstellationSpec, taus, per_hop_processing: float = PROCESSING_MS
) -> np.ndarray:
    """Mean request delay (ms) of a fixed set of routes at each sample time."""
    taus = np.atleast_1d(np.asarray(taus, dtype=float))
    if not result.assignments:
        return np.full(taus.shape, math.nan)
    usage: dict[tuple[int, int], int] = {}
    total_hops = 0
    for a in result.assignments:
        total_hops += a.hops
        for e in _edges_of(a.path):
            usage[e] = usage.get(e, 0) + 1
    edges = np.array(list(usage), dtype=np.int64)
    weight = np.array(list(usage.values()), dtype=float)
    pos = positions(spec, taus)
    km = np.linalg.norm(pos[:, edges[:, 0]] - pos[:, edges[:, 1]], axis=-1) @ weight
    count = len(result.assignments)
    return km / count / SPEED_OF_LIGHT_KM_S * 1000.0 + total_hops / count * per_hop_processing
