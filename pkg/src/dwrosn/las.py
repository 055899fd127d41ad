"""Link-assignment schemes: PEIM plus the ACT and Greedy baselines.

Every scheme starts from a slot's potential-link matrix and a per-node terminal
budget and keeps establishing links until no potential link with two free
endpoints remains. PEIM ranks candidates by the hop decrease (A) and the gain in
equal-length shortest paths (B) each link would bring, normalises both by their
maxima, and breaks ties in favour of the endpoint with the fewest remaining
potential links.
"""
from __future__ import annotations

import enum
import logging
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .graph import edge_gains, hop_matrix, hops_and_counts, shortest_path_counts
from .orbital import ConstellationSpec
from .topology import NodeSet, PotentialLinkMatrix, TopologySnapshot, build_potential_matrix, is_connected

log = logging.getLogger(__name__)

__all__ = [
    "Scheme", "ImportanceMatrices", "CandidatePool", "InfeasibleAssignment",
    "hop_matrix", "shortest_path_counts", "importance_a", "importance_b", "importance_matrices",
    "combine_importance", "tie_break_select", "peim_assign", "act_assign", "greedy_assign",
    "assign", "candidate_pool", "generate_and_select", "substream",
]


RANKINGS = ("lexicographic", "sum")


class Scheme(str, enum.Enum):
    PEIM = "peim"
    ACT = "act"
    GREEDY = "greedy"


class InfeasibleAssignment(RuntimeError):
    """Raised when a scheme keeps producing disconnected topologies."""


@dataclass(frozen=True)
class ImportanceMatrices:
    A: np.ndarray
    B: np.ndarray
    C: np.ndarray


@dataclass
class CandidatePool:
    candidates: list[TopologySnapshot]
    hbar: np.ndarray
    selected: int
    discarded: int = 0

    @property
    def best(self) -> TopologySnapshot:
        return self.candidates[self.selected]


def substream(*key: int) -> np.random.Generator:
    """Independent generator addressed by an integer key path, e.g. (seed, slot, scheme, i)."""
    return np.random.default_rng(np.random.SeedSequence([int(k) for k in key]))


def _feasible_pairs(L: np.ndarray, free: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    iu, ju = np.nonzero(np.triu(L, 1))
    ok = free[iu] & free[ju]
    return iu[ok], ju[ok]


def _gain_matrices(snapshot: TopologySnapshot, L) -> tuple[np.ndarray, np.ndarray]:
    L = np.asarray(getattr(L, "L", L), dtype=bool)
    free = snapshot.used_terminals < snapshot.degree
    iu, ju = _feasible_pairs(L & ~snapshot.edges, free)
    H, K = hops_and_counts(snapshot)
    a, b = edge_gains(H, K, iu, ju)
    n = snapshot.n
    A = np.zeros((n, n), dtype=np.int64)
    B = np.zeros((n, n), dtype=np.int64)
    A[iu, ju] = A[ju, iu] = a
    B[iu, ju] = B[ju, iu] = b
    return A, B


def importance_a(snapshot: TopologySnapshot, L) -> np.ndarray:
    """Hop-decrease matrix A over potential links whose endpoints both have free terminals."""
    return _gain_matrices(snapshot, L)[0]


def importance_b(snapshot: TopologySnapshot, L) -> np.ndarray:
    """Equal-length path gain matrix B; pairs whose distance drops contribute nothing."""
    return _gain_matrices(snapshot, L)[1]


def combine_importance(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    A = np.asarray(A, dtype=float)
    B = np.asarray(B, dtype=float)
    if A.shape != B.shape:
        raise ValueError("A and B must have the same shape")
    C = np.zeros_like(A)
    if A.size and A.max() > 0:
        C += A / A.max()
    if B.size and B.max() > 0:
        C += B / B.max()
    return C


def importance_matrices(snapshot: TopologySnapshot, L) -> ImportanceMatrices:
    A, B = _gain_matrices(snapshot, L)
    return ImportanceMatrices(A, B, combine_importance(A, B))


def _pick_min_ivc(iu, ju, L: np.ndarray, rng: np.random.Generator) -> tuple[int, int]:
    nvc = L.sum(axis=1)
    ivc = np.minimum(nvc[iu], nvc[ju])
    keep = np.flatnonzero(ivc == ivc.min())
    k = keep[0] if keep.size == 1 else keep[rng.integers(keep.size)]
    return int(iu[k]), int(ju[k])


def tie_break_select(C: np.ndarray, L, rng: np.random.Generator) -> tuple[int, int]:
    """Among potential links with maximal C keep those with the smallest visibility
    coefficient min(row-sum L_i, row-sum L_j) and return one of them uniformly."""
    L = np.asarray(getattr(L, "L", L), dtype=bool)
    iu, ju = np.nonzero(np.triu(L, 1))
    if iu.size == 0:
        raise ValueError("no potential links remain")
    score = np.asarray(C)[iu, ju]
    top = score == score.max()
    return _pick_min_ivc(iu[top], ju[top], L, rng)


def _top_lexicographic(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Mask of candidates with maximal A, narrowed to maximal B among those."""
    top = a == a.max()
    b_top = np.where(top, b, -1)
    return b_top == b_top.max()


def _top_scores(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Mask of candidates attaining max(a/maxA + b/maxB), compared exactly."""
    ma = int(a.max()) or 1
    mb = int(b.max()) or 1
    approx = a / ma + b / mb
    near = np.flatnonzero(approx >= approx.max() - 1e-9)
    # cross-multiplied integer keys avoid float ties between distinct fractions
    keys = [int(a[k]) * mb + int(b[k]) * ma for k in near]
    best = max(keys)
    mask = np.zeros(a.size, dtype=bool)
    mask[[k for k, key in zip(near, keys) if key == best]] = True
    return mask


def _as_matrix(L0) -> tuple[np.ndarray, float, float]:
    if isinstance(L0, PotentialLinkMatrix):
        return L0.L.copy(), L0.slot_start, L0.slot_length
    return np.array(L0, dtype=bool), 0.0, 0.0


def _finish(E, nodes: NodeSet, t, dt) -> TopologySnapshot:
    return TopologySnapshot(E, nodes.degree, t, dt, nodes.nodes)


def peim_assign(L0, nodes: NodeSet, rng: np.random.Generator, ranking: str = "lexicographic") -> TopologySnapshot:
    """Grow the topology one link at a time, always taking the most important potential link.

    ``ranking="lexicographic"`` orders candidates by hop decrease A and uses the
    path gain B only to separate equal-A candidates. ``ranking="sum"`` uses the
    max-normalised sum A/max(A) + B/max(B) directly; on the reference
    constellation it spends terminals on equal-length detours while the graph
    is still fragmented and ends with a markedly longer average distance.
    """
    if ranking not in RANKINGS:
        raise ValueError(f"unknown ranking {ranking!r}")
    top_of = _top_lexicographic if ranking == "lexicographic" else _top_scores
    L, t, dt = _as_matrix(L0)
    n = L.shape[0]
    d = nodes.degree
    E = np.zeros((n, n), dtype=bool)
    f = np.zeros(n, dtype=np.int64)
    while True:
        iu, ju = np.nonzero(np.triu(L, 1))
        if iu.size == 0:
            break
        H, K = hops_and_counts(E)
        a, b = edge_gains(H, K, iu, ju)
        top = top_of(a, b)
        i, j = _pick_min_ivc(iu[top], ju[top], L, rng)
        E[i, j] = E[j, i] = True
        L[i, j] = L[j, i] = False
        for v in (i, j):
            f[v] += 1
            if f[v] == d[v]:
                L[v, :] = False
                L[:, v] = False
    return _finish(E, nodes, t, dt)


def act_assign(L0, nodes: NodeSet, rng: np.random.Generator) -> TopologySnapshot:
    """Uniformly random feasible link at every step.

    Walking a uniform random permutation of the potential links and skipping the
    infeasible ones yields exactly that distribution.
    """
    L, t, dt = _as_matrix(L0)
    n = L.shape[0]
    E = np.zeros((n, n), dtype=bool)
    free = nodes.degree.copy()
    iu, ju = np.nonzero(np.triu(L, 1))
    for k in rng.permutation(iu.size):
        i, j = iu[k], ju[k]
        if free[i] and free[j]:
            E[i, j] = E[j, i] = True
            free[i] -= 1
            free[j] -= 1
    return _finish(E, nodes, t, dt)


def greedy_assign(L0, nodes: NodeSet, rng: np.random.Generator) -> TopologySnapshot:
    """Nearest-neighbour greedy: visit nodes in random order; each node links to its
    closest potential neighbours that still have a free terminal until its own
    terminals run out. Link lengths come from ``L0.distance`` when present,
    otherwise every candidate is equally close and order is random.
    """
    L, t, dt = _as_matrix(L0)
    n = L.shape[0]
    dist = getattr(L0, "distance", None)
    if dist is None:
        dist = np.zeros((n, n))
    E = np.zeros((n, n), dtype=bool)
    free = nodes.degree.copy()
    for v in rng.permutation(n):
        nbr = np.flatnonzero(L[v])
        if nbr.size == 0:
            continue
        nbr = nbr[np.lexsort((rng.random(nbr.size), dist[v, nbr]))]
        for w in nbr:
            if free[v] == 0:
                break
            if free[w] and not E[v, w]:
                E[v, w] = E[w, v] = True
                free[v] -= 1
                free[w] -= 1
    return _finish(E, nodes, t, dt)


_ASSIGNERS = {Scheme.PEIM: peim_assign, Scheme.ACT: act_assign, Scheme.GREEDY: greedy_assign}


def assign(scheme: Scheme | str, L0, nodes: NodeSet, rng: np.random.Generator, **kw) -> TopologySnapshot:
    return _ASSIGNERS[Scheme(scheme)](L0, nodes, rng, **kw)


def _avg_hops(snapshot: TopologySnapshot) -> float:
    n = snapshot.n
    return float(hop_matrix(snapshot).sum() / (n * (n - 1)))


def _seed_key(rng) -> tuple[int, ...]:
    if isinstance(rng, np.random.Generator):
        return (int(rng.integers(2**63)),)
    if isinstance(rng, (int, np.integer)):
        return (int(rng),)
    return tuple(int(k) for k in rng)


def candidate_pool(
    scheme: Scheme | str,
    potential: PotentialLinkMatrix,
    nodes: NodeSet,
    count: int,
    rng: np.random.Generator | int | Sequence[int],
    ranking: str = "lexicographic",
) -> CandidatePool:
    """Collect ``count`` connected topologies; candidate i draws from substream (key..., i)."""
    if count < 1:
        raise ValueError("count must be at least 1")
    key = _seed_key(rng)
    kw = {"ranking": ranking} if Scheme(scheme) is Scheme.PEIM else {}
    candidates, discarded = [], 0
    for i in range(count):
        gen = substream(*key, i)
        misses = 0
        while True:
            snap = assign(scheme, potential, nodes, gen, **kw)
            if is_connected(snap):
                candidates.append(snap)
                break
            misses += 1
            discarded += 1
            if misses >= 10 * count:
                raise InfeasibleAssignment(
                    f"{Scheme(scheme).value}: {misses} consecutive disconnected topologies at t={potential.slot_start:g}"
                )
    hbar = np.array([_avg_hops(s) for s in candidates])
    selected = int(np.argmin(hbar))
    log.debug("%s pool t=%g: hbar min %.4f max %.4f, %d discarded",
              Scheme(scheme).value, potential.slot_start, hbar.min(), hbar.max(), discarded)
    return CandidatePool(candidates, hbar, selected, discarded)


def generate_and_select(
    scheme: Scheme | str,
    spec: ConstellationSpec,
    nodes: NodeSet,
    t: float,
    dt: float,
    count: int,
    rng,
    step: float = 1.0,
    potential: PotentialLinkMatrix | None = None,
    ranking: str = "lexicographic",
) -> tuple[TopologySnapshot, float]:
    """Best (lowest average hop count) connected topology out of ``count`` candidates."""
    if potential is None:
        potential = build_potential_matrix(spec, nodes, t, dt, step)
    pool = candidate_pool(scheme, potential, nodes, count, rng, ranking)
    return pool.best, float(pool.hbar[pool.selected])
