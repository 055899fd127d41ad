"""Potential-link matrices, link classes, and per-slot topology snapshots."""
from __future__ import annotations

import enum
from collections import deque
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .orbital import ConstellationSpec, Layer, SatelliteId, positions, sample_times, visibility_matrix, window_visibility


class LinkClass(str, enum.Enum):
    INTRAORBIT = "intraorbit"
    INTERORBIT_SAME_LAYER = "interorbit"
    INTER_LAYER = "inter_layer"


@dataclass(frozen=True)
class NodeSet:
    nodes: tuple[SatelliteId, ...]
    degree: np.ndarray

    def __post_init__(self):
        degree = np.asarray(self.degree, dtype=np.int64)
        if degree.shape != (len(self.nodes),):
            raise ValueError("one degree per node required")
        if np.any(degree < 1):
            raise ValueError("every node needs at least one terminal")
        degree.setflags(write=False)
        object.__setattr__(self, "degree", degree)

    @classmethod
    def for_constellation(cls, spec: ConstellationSpec, d_leo: int = 5, d_geo: int = 6) -> "NodeSet":
        per_layer = {Layer.LEO: d_leo, Layer.GEO: d_geo}
        return cls(spec.satellites, np.array([per_layer[s.layer] for s in spec.satellites]))

    def __len__(self):
        return len(self.nodes)


@dataclass(frozen=True)
class PotentialLinkMatrix:
    L: np.ndarray
    slot_start: float
    slot_length: float
    distance: np.ndarray | None = field(default=None, compare=False, repr=False)  # km at slot start

    def __post_init__(self):
        L = np.array(self.L, dtype=bool)
        if L.ndim != 2 or L.shape[0] != L.shape[1]:
            raise ValueError("potential matrix must be square")
        if np.any(L != L.T) or np.any(np.diag(L)):
            raise ValueError("potential matrix must be symmetric with zero diagonal")
        L.setflags(write=False)
        object.__setattr__(self, "L", L)

    @property
    def n(self) -> int:
        return self.L.shape[0]

    def n_links(self) -> int:
        return int(self.L.sum() // 2)


@dataclass(frozen=True)
class TopologySnapshot:
    edges: np.ndarray
    degree: np.ndarray
    slot_start: float = 0.0
    slot_length: float = 0.0
    nodes: tuple[SatelliteId, ...] | None = field(default=None, compare=False)

    def __post_init__(self):
        E = np.array(self.edges, dtype=bool)
        if E.ndim != 2 or E.shape[0] != E.shape[1]:
            raise ValueError("edge matrix must be square")
        if np.any(E != E.T) or np.any(np.diag(E)):
            raise ValueError("edge matrix must be symmetric with zero diagonal")
        degree = np.asarray(self.degree, dtype=np.int64)
        if np.any(E.sum(axis=1) > degree):
            raise ValueError("a node uses more terminals than it carries")
        E.setflags(write=False)
        degree.setflags(write=False)
        object.__setattr__(self, "edges", E)
        object.__setattr__(self, "degree", degree)

    @property
    def n(self) -> int:
        return self.edges.shape[0]

    @property
    def used_terminals(self) -> np.ndarray:
        return self.edges.sum(axis=1)

    def edge_list(self) -> list[tuple[int, int]]:
        i, j = np.nonzero(np.triu(self.edges, 1))
        return list(zip(i.tolist(), j.tolist()))

    def neighbors(self) -> list[list[int]]:
        return [np.flatnonzero(row).tolist() for row in self.edges]


def build_potential_matrix(
    spec: ConstellationSpec, nodes: NodeSet | None, t: float, dt: float, step: float = 1.0
) -> PotentialLinkMatrix:
    """Pairs that keep line of sight at every ``step`` sample of ``[t, t + dt)``."""
    if dt <= 0:
        raise ValueError("slot length must be positive")
    L = window_visibility(spec, sample_times(t, t + dt, step))
    pos = positions(spec, t)
    dist = np.linalg.norm(pos[:, None] - pos[None, :], axis=-1)
    if nodes is not None:
        idx = [s.index for s in nodes.nodes]
        L = L[np.ix_(idx, idx)]
        dist = dist[np.ix_(idx, idx)]
    return PotentialLinkMatrix(L, t, dt, dist)


def classify_link(i: SatelliteId, j: SatelliteId) -> LinkClass:
    if i == j:
        raise ValueError("a link needs two distinct satellites")
    if i.layer != j.layer:
        return LinkClass.INTER_LAYER
    if i.plane == j.plane:
        return LinkClass.INTRAORBIT
    return LinkClass.INTERORBIT_SAME_LAYER


def link_class_matrix(sats) -> np.ndarray:
    """N x N array of LinkClass codes (0 intraorbit, 1 interorbit, 2 inter-layer, -1 diagonal)."""
    layer = np.array([s.layer.value for s in sats])
    plane = np.array([s.plane for s in sats])
    out = np.where(layer[:, None] != layer[None, :], 2, np.where(plane[:, None] == plane[None, :], 0, 1))
    np.fill_diagonal(out, -1)
    return out


_CLASSES = (LinkClass.INTRAORBIT, LinkClass.INTERORBIT_SAME_LAYER, LinkClass.INTER_LAYER)


@dataclass
class LinkCensus:
    t: float
    dt: float
    visible: np.ndarray  # (N, 3) per-node counts by class
    potential: np.ndarray

    def totals(self) -> dict[LinkClass, tuple[int, int]]:
        """Aggregate (visible, potential) link counts per class; each link counted once."""
        return {c: (int(self.visible[:, k].sum() // 2), int(self.potential[:, k].sum() // 2)) for k, c in enumerate(_CLASSES)}

    def total_potential(self) -> int:
        return int(self.potential.sum() // 2)

    def total_visible(self) -> int:
        return int(self.visible.sum() // 2)

    def node(self, index: int) -> dict[LinkClass, tuple[int, int]]:
        return {c: (int(self.visible[index, k]), int(self.potential[index, k])) for k, c in enumerate(_CLASSES)}

    def same_layer(self, index: int) -> tuple[int, int]:
        v, p = self.visible[index], self.potential[index]
        return int(v[0] + v[1]), int(p[0] + p[1])

    def inter_layer(self, index: int) -> tuple[int, int]:
        return int(self.visible[index, 2]), int(self.potential[index, 2])


def link_census(
    spec: ConstellationSpec, nodes: NodeSet | None, t: float, dt: float, step: float = 1.0,
    potential: PotentialLinkMatrix | None = None,
) -> LinkCensus:
    """Visible (at the slot start) and potential (whole slot) links per node and class."""
    sats = spec.satellites if nodes is None else nodes.nodes
    idx = [s.index for s in sats]
    vis = visibility_matrix(spec, t)[np.ix_(idx, idx)]
    if potential is None:
        potential = build_potential_matrix(spec, nodes, t, dt, step)
    cls = link_class_matrix(sats)
    visible = np.stack([(vis & (cls == k)).sum(axis=1) for k in range(3)], axis=1)
    pot = np.stack([(potential.L & (cls == k)).sum(axis=1) for k in range(3)], axis=1)
    return LinkCensus(t, dt, visible, pot)


def is_connected(snapshot: TopologySnapshot) -> bool:
    n = snapshot.n
    if n <= 1:
        return True
    adj = snapshot.neighbors()
    seen = [False] * n
    seen[0] = True
    queue = deque([0])
    reached = 1
    while queue:
        v = queue.popleft()
        for w in adj[v]:
            if not seen[w]:
                seen[w] = True
                reached += 1
                queue.append(w)
    return reached == n


def write_edge_list(snapshot: TopologySnapshot, path: str | Path, sats=None) -> None:
    """``# t=<s> dt=<s>`` header followed by one ``LAYER:p:m LAYER:p:m`` pair per line."""
    sats = sats or snapshot.nodes
    if sats is None:
        raise ValueError("satellite identities are needed to label edges")
    lines = [f"# t={snapshot.slot_start:g} dt={snapshot.slot_length:g}"]
    lines += [f"{sats[i].label} {sats[j].label}" for i, j in snapshot.edge_list()]
    Path(path).write_text("\n".join(lines) + "\n")


def read_edge_list(path: str | Path, spec: ConstellationSpec, degree) -> TopologySnapshot:
    t = dt = 0.0
    n = spec.n_sats
    E = np.zeros((n, n), dtype=bool)
    for raw in Path(path).read_text().splitlines():
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            for tok in line[1:].split():
                key, _, val = tok.partition("=")
                if key == "t":
                    t = float(val)
                elif key == "dt":
                    dt = float(val)
            continue
        a, b = line.split()
        i = spec.satellite(*_parse_label(a)).index
        j = spec.satellite(*_parse_label(b)).index
        if i == j or E[i, j]:
            raise ValueError(f"bad edge line: {raw!r}")
        E[i, j] = E[j, i] = True
    return TopologySnapshot(E, degree, t, dt, spec.satellites)


def _parse_label(label: str):
    layer, p, m = label.split(":")
    return Layer(layer), int(p), int(m)
