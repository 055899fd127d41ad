import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from dwrosn.graph import edge_gains, hop_matrix, hops_and_counts, shortest_path_counts
from dwrosn.topology import TopologySnapshot
from oracles import floyd_warshall, path_counts_by_enumeration, path_counts_by_walks, random_graph


def _snap(n, edges):
    E = np.zeros((n, n), dtype=bool)
    for i, j in edges:
        E[i, j] = E[j, i] = True
    return TopologySnapshot(E, [n] * n)


def test_path_graph_hops():
    H = hop_matrix(_snap(3, [(0, 1), (1, 2)]))
    assert H[0, 2] == 2 and H[0, 1] == 1 and H[1, 1] == 0


def test_sentinel_for_unreachable():
    H = hop_matrix(_snap(4, [(0, 1), (2, 3)]))
    assert H[0, 2] == 4 and H[1, 3] == 4


def test_four_cycle_counts():
    K = shortest_path_counts(_snap(4, [(0, 1), (1, 2), (2, 3), (3, 0)]))
    assert K[0, 2] == 2 and K[1, 3] == 2 and K[0, 1] == 1


def test_tree_counts_are_one():
    K = shortest_path_counts(_snap(6, [(0, 1), (0, 2), (1, 3), (1, 4), (2, 5)]))
    assert (K == 1).all()


graphs = st.builds(
    lambda seed, n, p: random_graph(np.random.default_rng(seed), n, p),
    st.integers(0, 2**32 - 1), st.integers(1, 10), st.floats(0.0, 0.8),
)


@settings(max_examples=200, deadline=None)
@given(graphs)
def test_hops_match_floyd_warshall(E):
    H, K = hops_and_counts(E)
    D = floyd_warshall(E)
    assert np.array_equal(H, D)
    assert np.array_equal(H, H.T)
    assert np.array_equal(K, K.T)
    assert ((K >= 1) == (H < E.shape[0])).all()


@settings(max_examples=100, deadline=None)
@given(graphs.filter(lambda E: E.shape[0] <= 8))
def test_counts_match_enumeration(E):
    assert np.array_equal(shortest_path_counts(E), path_counts_by_enumeration(E))


def test_counts_match_walk_oracle_on_larger_graphs():
    rng = np.random.default_rng(9)
    for _ in range(30):
        E = random_graph(rng, 30, 0.12)
        H, K = hops_and_counts(E)
        assert np.array_equal(K, path_counts_by_walks(E, H))


def test_edge_gains_on_path_example():
    # 0-1-2, adding 0-2: ordered pairs (0,2),(2,0) each drop 2 -> 1
    H, K = hops_and_counts(_snap(3, [(0, 1), (1, 2)]))
    a, b = edge_gains(H, K, [0], [2])
    assert a.tolist() == [2] and b.tolist() == [0]
