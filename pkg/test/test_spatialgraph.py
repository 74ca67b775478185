# -*- coding: utf-8 -*-
"""Module use for testing the spatialgraph package."""
import unittest

import numpy as np

from .context import spatialgraph
from .context import util

def brute_force_edges(coords, k):
    """O(n^2) scan with (distance, index) ordering."""
    n_nodes = coords.shape[0]
    edges = []
    for target in range(n_nodes):
        squared = np.sum((coords - coords[target]) ** 2, axis=1)
        others = [node for node in range(n_nodes) if node != target]
        others.sort(key=lambda node: (squared[node], node))
        edges.extend((source, target) for source in others[:min(k, n_nodes - 1)])
    return sorted(edges, key=lambda edge: (edge[1], edge[0]))

class TestKnnGraph(unittest.TestCase):
    """Directed kNN graph construction."""

    def test_collinear_example(self):
        graph = spatialgraph.knn_graph([[0, 0], [1, 0], [3, 0]], k=1)
        self.assertEqual(graph.edges, [(1, 0), (0, 1), (1, 2)])

    def test_complete_graph(self):
        coords = np.random.default_rng(0).uniform(size=(4, 2))
        graph = spatialgraph.knn_graph(coords, k=3)
        self.assertEqual(graph.n_edges, 12)
        self.assertTrue(all(source != target for source, target in graph.edges))
        self.assertEqual(graph.n_edges, len(set(graph.edges)))

    def test_k_larger_than_n(self):
        graph = spatialgraph.knn_graph([[0, 0], [1, 0], [0, 1]], k=5)
        np.testing.assert_array_equal(graph.in_degree(), [2, 2, 2])

    def test_brute_force_oracle(self):
        """Random instances, including duplicated and tied points."""
        rng = np.random.default_rng(42)
        for instance in range(100):
            n_nodes = int(rng.integers(2, 301))
            k = int(rng.integers(1, 8))
            if instance % 3 == 0:
                coords = rng.integers(0, 6, size=(n_nodes, 2)).astype(float)
            else:
                coords = rng.uniform(size=(n_nodes, 2))
            graph = spatialgraph.knn_graph(coords, k)
            self.assertEqual(graph.edges, brute_force_edges(coords, k))

    def test_in_degree_and_no_self_loops(self):
        coords = np.random.default_rng(1).uniform(size=(200, 2))
        graph = spatialgraph.knn_graph(coords, k=5)
        np.testing.assert_array_equal(graph.in_degree(), np.full(200, 5))
        self.assertFalse(np.any(graph.sources == graph.targets))

    def test_translation_and_scaling_invariance(self):
        coords = np.random.default_rng(2).uniform(size=(60, 2))
        base = spatialgraph.knn_graph(coords, k=4).edges
        moved = spatialgraph.knn_graph(coords * 3.5 + np.array([10.0, -7.0]), k=4).edges
        self.assertEqual(base, moved)

    def test_canonical_order_and_determinism(self):
        coords = np.random.default_rng(3).uniform(size=(50, 2))
        first = spatialgraph.knn_graph(coords, k=5)
        second = spatialgraph.knn_graph(coords, k=5)
        self.assertEqual(first.sources.tobytes(), second.sources.tobytes())
        self.assertEqual(first.targets.tobytes(), second.targets.tobytes())
        keys = list(zip(first.targets.tolist(), first.sources.tolist()))
        self.assertEqual(keys, sorted(keys))

    def test_errors(self):
        with self.assertRaises(util.ContractError):
            spatialgraph.knn_graph([[0, 0]], k=1)
        with self.assertRaises(util.ContractError):
            spatialgraph.knn_graph([[0, 0], [1, 1]], k=0)
        with self.assertRaises(util.DataError) as context:
            spatialgraph.knn_graph([[0, 0], [np.nan, 1], [2, 2]], k=1)
        self.assertIn('row 1', str(context.exception))

    def test_graph_arrays_are_read_only(self):
        graph = spatialgraph.knn_graph([[0, 0], [1, 0], [3, 0]], k=1)
        with self.assertRaises(ValueError):
            graph.sources[0] = 2

class TestGraphWeights(unittest.TestCase):
    """Row standardized and inverse distance weights."""

    def test_row_standardized_examples(self):
        coords = np.random.default_rng(4).uniform(size=(30, 2))
        weights = spatialgraph.row_standardized_weights(spatialgraph.knn_graph(coords, k=5))
        np.testing.assert_allclose(weights, np.full(150, 0.2))
        weights = spatialgraph.row_standardized_weights(spatialgraph.knn_graph(coords, k=1))
        np.testing.assert_array_equal(weights, np.ones(30))

    def test_row_sums(self):
        coords = np.random.default_rng(5).uniform(size=(80, 2))
        graph = spatialgraph.symmetrize(spatialgraph.knn_graph(coords, k=3))
        weights = spatialgraph.row_standardized_weights(graph)
        sums = np.bincount(graph.targets, weights=weights, minlength=80)
        np.testing.assert_allclose(sums, np.ones(80), rtol=0, atol=1e-12)

    def test_isolated_node(self):
        graph = spatialgraph.SpatialGraph(2, np.array([0]), np.array([1]),
                                          np.zeros((2, 2)))
        with self.assertRaises(util.ContractError):
            spatialgraph.row_standardized_weights(graph)

    def test_symmetrize(self):
        graph = spatialgraph.symmetrize(spatialgraph.knn_graph([[0, 0], [1, 0], [3, 0]], k=1))
        self.assertEqual(graph.edges, [(1, 0), (0, 1), (2, 1), (1, 2)])

    def test_batch_graph_inverse_distance(self):
        graph = spatialgraph.build_batch_graph([[0, 0], [1, 0], [3, 0]], k=1,
                                               edge_weights='inverse_distance')
        np.testing.assert_allclose(graph.weights(), [1.0, 1.0, 0.5])
        plain = spatialgraph.build_batch_graph([[0, 0], [1, 0], [3, 0]], k=1)
        self.assertIsNone(plain.edge_weight)
        np.testing.assert_array_equal(plain.weights(), np.ones(3))

    def test_batch_graph_single_point(self):
        graph = spatialgraph.build_batch_graph([[0.4, 0.6]], k=5)
        self.assertEqual(graph.n_nodes, 1)
        self.assertEqual(graph.n_edges, 0)
        np.testing.assert_array_equal(graph.in_degree(), [0])
