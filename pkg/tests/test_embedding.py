"""Tests for the graph-to-statevector encoding."""

import itertools

import numpy as np
import pytest

from cliquesym import UsageError, expectation_z, permute_qubits
from cliquesym.embedding import embed_graph, embed_many
from cliquesym.graphs import Graph, gen_er_graph, permute_graph


def reference_amplitudes(graph):
    """Oracle: amplitude of basis index x is (+-1)/sqrt(2^n), the sign being
    (-1) to the number of edges whose endpoints are both set bits of x."""
    n = graph.n_nodes
    flat = np.empty(2**n, dtype=np.complex128)
    for x in range(2**n):
        bits = [(x >> q) & 1 for q in range(n)]
        inside = sum(1 for i, j in graph.edges if bits[i] and bits[j])
        flat[x] = (-1.0) ** inside / np.sqrt(2**n)
    return flat


class TestEmbedGraph:
    def test_empty_graph_is_uniform(self):
        state = embed_graph(Graph.from_edges(3, []))
        assert np.allclose(state.amplitudes, 1 / np.sqrt(8))

    def test_single_edge_two_nodes(self):
        state = embed_graph(Graph.from_edges(2, [(0, 1)]))
        # only index 3 = |11> picks up the edge sign
        expected = 0.5 * np.array([1, 1, 1, -1], dtype=np.complex128)
        assert np.allclose(state.amplitudes, expected)

    def test_matches_sign_oracle(self):
        rng = np.random.default_rng(17)
        for _ in range(20):
            n = int(rng.integers(2, 8))
            g = gen_er_graph(n, float(rng.uniform(0.2, 0.9)), rng)
            assert np.allclose(
                embed_graph(g).amplitudes, reference_amplitudes(g), atol=1e-12
            )

    def test_normalized(self):
        rng = np.random.default_rng(1)
        g = gen_er_graph(6, 0.5, rng)
        assert abs(embed_graph(g).norm() - 1.0) < 1e-12

    def test_all_z_expectations_vanish(self):
        rng = np.random.default_rng(2)
        for _ in range(10):
            g = gen_er_graph(6, float(rng.uniform(0.1, 0.9)), rng)
            state = embed_graph(g)
            for q in range(6):
                assert abs(expectation_z(state, q)) < 1e-12

    def test_edge_order_does_not_matter(self):
        edges = [(0, 1), (1, 2), (0, 3), (2, 3)]
        a = embed_graph(Graph.from_edges(4, edges))
        b = embed_graph(Graph.from_edges(4, edges[::-1]))
        assert np.allclose(a.amplitudes, b.amplitudes)

    def test_commutes_with_node_relabeling(self):
        rng = np.random.default_rng(23)
        for _ in range(15):
            n = int(rng.integers(2, 8))
            g = gen_er_graph(n, float(rng.uniform(0.2, 0.9)), rng)
            perm = [int(p) for p in rng.permutation(n)]
            direct = embed_graph(permute_graph(g, perm))
            routed = permute_qubits(embed_graph(g), perm)
            assert np.allclose(direct.amplitudes, routed.amplitudes, atol=1e-12)


class TestEmbedMany:
    def test_matches_single_embeddings(self):
        rng = np.random.default_rng(4)
        graphs = [gen_er_graph(5, 0.5, rng) for _ in range(6)]
        batch = embed_many(graphs)
        assert batch.shape == (6, 32)
        for b, g in enumerate(graphs):
            assert np.array_equal(batch[b], embed_graph(g).amplitudes)

    def test_rejects_empty_and_mixed_sizes(self):
        with pytest.raises(UsageError):
            embed_many([])
        with pytest.raises(UsageError):
            embed_many([Graph.from_edges(3, []), Graph.from_edges(4, [])])


def test_distinct_graphs_get_distinct_states():
    states = [
        embed_graph(Graph.from_edges(3, edges)).amplitudes.ravel()
        for edges in ([], [(0, 1)], [(0, 2)], [(0, 1), (1, 2)])
    ]
    for a, b in itertools.combinations(states, 2):
        assert not np.allclose(a, b)
