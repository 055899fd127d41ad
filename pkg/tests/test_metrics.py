import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dwrosn.metrics import MetricsReport, avg_distance, connectivity, hop_distribution, utilization
from dwrosn.topology import TopologySnapshot, is_connected
from oracles import random_graph


def _snap(n, edges, degree=None):
    E = np.zeros((n, n), dtype=bool)
    for i, j in edges:
        E[i, j] = E[j, i] = True
    return TopologySnapshot(E, degree if degree is not None else [n] * n)


def test_utilization_examples():
    assert utilization(_snap(2, [(0, 1)], [1, 1])) == 1.0
    assert utilization(_snap(3, [], [2, 2, 2])) == 0.0
    assert utilization(_snap(3, [(0, 1)], [2, 2, 2])) == pytest.approx(2 / 6)


def test_path_three_nodes():
    snap = _snap(3, [(0, 1), (1, 2)])
    assert avg_distance(snap) == pytest.approx(8 / 6)
    assert connectivity(snap, 1) == pytest.approx(4 / 6)
    assert connectivity(snap, 2) == 1.0


def test_complete_graph():
    n = 5
    snap = TopologySnapshot(~np.eye(n, dtype=bool), [n - 1] * n)
    assert avg_distance(snap) == 1.0
    assert hop_distribution(snap) == ({1: 1.0}, 0.0)


def test_disconnected_guarded():
    snap = _snap(4, [(0, 1), (2, 3)])
    with pytest.raises(ValueError):
        avg_distance(snap)
    dist, unreachable = hop_distribution(snap)
    assert dist == {1: pytest.approx(4 / 12)} and unreachable == pytest.approx(8 / 12)
    assert connectivity(snap, None) == pytest.approx(4 / 12)
    with pytest.raises(ValueError):
        connectivity(snap, 0)


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(2, 20), st.floats(0.05, 0.9))
def test_metric_identities(seed, n, p):
    E = random_graph(np.random.default_rng(seed), n, p)
    snap = TopologySnapshot(E, [n] * n)
    betas = [connectivity(snap, h) for h in range(1, n)]
    assert betas == sorted(betas)
    assert all(0 <= b <= 1 for b in betas)
    assert (betas[-1] == 1.0) == is_connected(snap)
    dist, unreachable = hop_distribution(snap)
    assert sum(dist.values()) + unreachable == pytest.approx(1.0)
    if is_connected(snap):
        h = avg_distance(snap)
        assert h == pytest.approx(sum(k * v for k, v in dist.items()))
        assert h >= 1.0
        assert (h == 1.0) == (E.sum() == n * (n - 1))
    assert utilization(snap) == pytest.approx(E.sum() / (n * n))


def test_report():
    snap = _snap(4, [(0, 1), (1, 2), (2, 3)], [2, 2, 2, 2])
    rep = MetricsReport.of(snap, (1, 2, 3, None))
    assert rep.alpha == pytest.approx(6 / 8)
    assert rep.hbar == pytest.approx(20 / 12)
    assert rep.beta[3] == rep.beta[None] == 1.0
    rep.add_wavelengths(None, [3, 1, 2])
    assert rep.n_lambda[None] == (2.0, 1, 3)
    assert np.isnan(MetricsReport.of(_snap(3, [(0, 1)])).hbar)
