"""Evaluation quantities: terminal utilization, average hop distance, pair connectivity."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .graph import hop_matrix


def utilization(snapshot) -> float:
    return float(snapshot.used_terminals.sum() / snapshot.degree.sum())


def _offdiag(H: np.ndarray) -> np.ndarray:
    return H[~np.eye(H.shape[0], dtype=bool)]


def avg_distance(snapshot, hops: np.ndarray | None = None) -> float:
    """Mean minimum hop count over ordered pairs; undefined for disconnected graphs."""
    H = hop_matrix(snapshot) if hops is None else hops
    n = H.shape[0]
    if n < 2:
        raise ValueError("average distance needs at least two nodes")
    vals = _offdiag(H)
    if np.any(vals >= n):
        raise ValueError("snapshot is disconnected")
    return float(vals.sum() / (n * (n - 1)))


def connectivity(snapshot, max_hops: int | None, hops: np.ndarray | None = None) -> float:
    """Fraction of ordered pairs joined by a path of at most ``max_hops`` hops (None = unbounded)."""
    H = hop_matrix(snapshot) if hops is None else hops
    n = H.shape[0]
    if n < 2:
        return 1.0
    if max_hops is not None and max_hops < 1:
        raise ValueError("max_hops must be at least 1")
    limit = n - 1 if max_hops is None else max_hops
    vals = _offdiag(H)
    return float(np.count_nonzero((vals <= limit) & (vals < n)) / (n * (n - 1)))


def hop_distribution(snapshot, hops: np.ndarray | None = None) -> tuple[dict[int, float], float]:
    """Fraction of ordered pairs at each finite hop count, plus the unreachable fraction."""
    H = hop_matrix(snapshot) if hops is None else hops
    n = H.shape[0]
    if n < 2:
        return {}, 0.0
    vals = _offdiag(H)
    total = n * (n - 1)
    finite = vals[vals < n]
    values, counts = np.unique(finite, return_counts=True)
    dist = {int(v): float(c / total) for v, c in zip(values, counts)}
    return dist, float((vals >= n).sum() / total)


@dataclass
class MetricsReport:
    alpha: float
    hbar: float
    beta: dict[int | None, float]
    hop_distribution: dict[int, float]
    unreachable: float = 0.0
    n_lambda: dict[int | None, tuple[float, int, int]] = field(default_factory=dict)
    delay_ms: tuple[float, float, float] | None = None

    @classmethod
    def of(cls, snapshot, max_hops_list=(1, 2, 3, 4, 5, None)) -> "MetricsReport":
        H = hop_matrix(snapshot)
        dist, unreachable = hop_distribution(snapshot, H)
        hbar = avg_distance(snapshot, H) if unreachable == 0 else float("nan")
        beta = {h: connectivity(snapshot, h, H) for h in max_hops_list}
        return cls(utilization(snapshot), hbar, beta, dist, unreachable)

    def add_wavelengths(self, max_hops, values) -> None:
        values = list(values)
        self.n_lambda[max_hops] = (float(np.mean(values)), int(min(values)), int(max(values)))
