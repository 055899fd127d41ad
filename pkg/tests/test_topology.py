import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dwrosn.orbital import ConstellationSpec, Layer, LayerSpec, is_visible, positions
from dwrosn.topology import (
    LinkClass, NodeSet, PotentialLinkMatrix, TopologySnapshot, build_potential_matrix, classify_link,
    is_connected, link_census, link_class_matrix, read_edge_list, write_edge_list,
)

SPEC = ConstellationSpec.reference()


def test_classify_examples():
    a = SPEC.satellite("LEO", 0, 0)
    assert classify_link(a, SPEC.satellite("LEO", 0, 1)) is LinkClass.INTRAORBIT
    assert classify_link(a, SPEC.satellite("GEO", 0, 0)) is LinkClass.INTER_LAYER
    assert classify_link(a, SPEC.satellite("LEO", 1, 0)) is LinkClass.INTERORBIT_SAME_LAYER
    with pytest.raises(ValueError):
        classify_link(a, a)


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 122), st.integers(0, 122))
def test_classify_symmetric_and_matches_matrix(i, j):
    if i == j:
        return
    a, b = SPEC.satellites[i], SPEC.satellites[j]
    assert classify_link(a, b) is classify_link(b, a)
    codes = {LinkClass.INTRAORBIT: 0, LinkClass.INTERORBIT_SAME_LAYER: 1, LinkClass.INTER_LAYER: 2}
    assert link_class_matrix(SPEC.satellites)[i, j] == codes[classify_link(a, b)]


def test_single_satellite_constellation_has_no_links():
    spec = ConstellationSpec((LayerSpec(Layer.LEO, 1, 1, 0, 800.0, 50.0, 6000.0),))
    P = build_potential_matrix(spec, None, 0.0, 100.0)
    assert P.L.shape == (1, 1) and not P.L.any()


def test_node_degrees():
    nodes = NodeSet.for_constellation(SPEC, 5, 7)
    assert nodes.degree[:120].tolist() == [5] * 120
    assert nodes.degree[120:].tolist() == [7] * 3
    with pytest.raises(ValueError):
        NodeSet(SPEC.satellites[:2], [1, 0])


def test_potential_matrix_properties(slot0_potential):
    L = slot0_potential.L
    assert np.array_equal(L, L.T) and not L.diagonal().any()
    pos0 = positions(SPEC, 0.0)
    iu, ju = np.nonzero(np.triu(L, 1))
    for i, j in zip(iu, ju):
        assert is_visible(pos0[i], pos0[j])
    assert slot0_potential.distance.shape == L.shape


def test_potential_links_visible_every_second(slot0_potential):
    # every potential link holds at each 1 s sample; checked with scalar calls on a subsample
    rng = np.random.default_rng(3)
    iu, ju = np.nonzero(np.triu(slot0_potential.L, 1))
    pos = positions(SPEC, np.arange(0.0, 2000.0, 1.0))
    for k in rng.choice(iu.size, 40, replace=False):
        i, j = iu[k], ju[k]
        assert all(is_visible(pos[t, i], pos[t, j]) for t in range(2000))


def test_random_constellation_potential_symmetric(rng):
    for _ in range(3):
        planes = int(rng.integers(2, 5))
        spec = ConstellationSpec((
            LayerSpec(Layer.LEO, planes * int(rng.integers(3, 7)), planes, int(rng.integers(0, planes)),
                      float(rng.uniform(500, 2000)), float(rng.uniform(0, 179)), float(rng.uniform(5000, 8000))),
            LayerSpec(Layer.GEO, 2, 1, 0, 35786.0, 0.0, 86400.0),
        ))
        P = build_potential_matrix(spec, None, float(rng.uniform(0, 1e4)), 300.0, 5.0)
        assert np.array_equal(P.L, P.L.T) and not P.L.diagonal().any()


def test_potential_matrix_validation():
    with pytest.raises(ValueError):
        PotentialLinkMatrix(np.array([[0, 1], [0, 0]]), 0.0, 1.0)
    with pytest.raises(ValueError):
        build_potential_matrix(SPEC, None, 0.0, 0.0)


def test_census_partition(slot0_potential):
    census = link_census(SPEC, None, 0.0, 2000.0, potential=slot0_potential)
    totals = census.totals()
    assert sum(p for _, p in totals.values()) == census.total_potential() == slot0_potential.n_links()
    assert sum(v for v, _ in totals.values()) == census.total_visible()
    for idx in (0, 57, 120):
        v_same, p_same = census.same_layer(idx)
        v_inter, p_inter = census.inter_layer(idx)
        assert p_same + p_inter == slot0_potential.L[idx].sum()
        assert p_same <= v_same and p_inter <= v_inter


def _snap(n, edges, degree=None):
    E = np.zeros((n, n), dtype=bool)
    for i, j in edges:
        E[i, j] = E[j, i] = True
    return TopologySnapshot(E, degree if degree is not None else [n] * n)


def test_is_connected_examples():
    assert is_connected(_snap(5, [(0, 1), (1, 2), (2, 3), (3, 4)]))
    assert not is_connected(_snap(4, [(0, 1), (2, 3)]))
    assert not is_connected(_snap(3, []))
    assert is_connected(_snap(1, []))


def test_snapshot_rejects_overused_terminals():
    with pytest.raises(ValueError):
        _snap(3, [(0, 1), (0, 2)], degree=[1, 1, 1])
    with pytest.raises(ValueError):
        TopologySnapshot(np.array([[1, 0], [0, 0]]), [1, 1])


def test_edge_list_roundtrip(tmp_path):
    n = SPEC.n_sats
    rng = np.random.default_rng(5)
    E = np.zeros((n, n), dtype=bool)
    for _ in range(60):
        i, j = rng.choice(n, 2, replace=False)
        E[i, j] = E[j, i] = True
    snap = TopologySnapshot(E, [n] * n, 4000.0, 2000.0, SPEC.satellites)
    path = tmp_path / "e.txt"
    write_edge_list(snap, path)
    text = path.read_text().splitlines()
    assert text[0] == "# t=4000 dt=2000"
    assert all(len(line.split()) == 2 for line in text[1:])
    back = read_edge_list(path, SPEC, [n] * n)
    assert np.array_equal(back.edges, E)
    assert (back.slot_start, back.slot_length) == (4000.0, 2000.0)
