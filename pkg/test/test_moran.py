# -*- coding: utf-8 -*-
"""Module use for testing the local Moran's I statistic."""
import unittest
from collections import defaultdict

import numpy as np

from .context import moran
from .context import spatialgraph
from .context import util

def double_loop_moran(y, graph):
    """Direct evaluation of I_i = z_i / m2 * sum_j w_ij z_j."""
    n_nodes = len(y)
    mean = sum(y) / n_nodes
    z = [value - mean for value in y]
    m2 = sum(value * value for value in z) / n_nodes
    result = []
    for i in range(n_nodes):
        neighbours = [source for source, target in graph.edges if target == i]
        lag = 0.0
        for j in neighbours:
            lag += z[j] / len(neighbours)
        result.append(z[i] / m2 * lag)
    return np.array(result)

def grid_graph(side):
    """Rook adjacency on a side x side lattice, both directions."""
    edges = []
    for row in range(side):
        for col in range(side):
            node = row * side + col
            for d_row, d_col in ((0, 1), (1, 0), (0, -1), (-1, 0)):
                other_row, other_col = row + d_row, col + d_col
                if 0 <= other_row < side and 0 <= other_col < side:
                    edges.append((other_row * side + other_col, node))
    sources = np.array([source for source, _ in edges])
    targets = np.array([target for _, target in edges])
    coords = np.array([[col, row] for row in range(side) for col in range(side)], dtype=float)
    return spatialgraph.SpatialGraph(side * side, sources, targets, coords)

class TestLocalMoran(unittest.TestCase):
    """local_moran against the double loop oracle and its invariants."""

    def test_line_example(self):
        coords = np.array([[0.0, 0.0], [1.0, 0.0], [2.0, 0.0], [3.0, 0.0]])
        graph = spatialgraph.knn_graph(coords, k=1)
        y = [0.0, 0.0, 1.0, 1.0]
        np.testing.assert_allclose(moran.local_moran(y, graph).values,
                                   double_loop_moran(y, graph), rtol=0, atol=1e-12)

    def test_random_instances(self):
        rng = np.random.default_rng(0)
        for n_nodes in (5, 40, 200, 500):
            coords = rng.uniform(size=(n_nodes, 2))
            graph = spatialgraph.knn_graph(coords, k=5)
            y = rng.normal(size=n_nodes)
            np.testing.assert_allclose(moran.local_moran(y, graph).values,
                                       double_loop_moran(list(y), graph),
                                       rtol=0, atol=1e-12)

    def test_constant_field(self):
        graph = spatialgraph.knn_graph([[0, 0], [1, 0], [2, 0]], k=1)
        with self.assertRaises(util.ContractError):
            moran.local_moran([2.0, 2.0, 2.0], graph)

    def test_length_mismatch(self):
        graph = spatialgraph.knn_graph([[0, 0], [1, 0], [2, 0]], k=1)
        with self.assertRaises(util.ContractError):
            moran.local_moran([1.0, 2.0], graph)

    def test_affine_invariance(self):
        rng = np.random.default_rng(1)
        graph = spatialgraph.knn_graph(rng.uniform(size=(60, 2)), k=4)
        y = rng.normal(size=60)
        base = moran.local_moran(y, graph).values
        for slope, shift in ((3.0, 1.0), (-0.5, 10.0), (1e3, -2.0)):
            np.testing.assert_allclose(moran.local_moran(slope * y + shift, graph).values, base,
                                       rtol=0, atol=1e-10)

    def test_checkerboard_is_negative(self):
        graph = grid_graph(4)
        y = np.array([(row + col) % 2 for row in range(4) for col in range(4)], dtype=float)
        values = moran.local_moran(y, graph).values
        self.assertTrue(np.all(values < 0))
        np.testing.assert_allclose(values, double_loop_moran(list(y), graph), rtol=0, atol=1e-12)

    def test_smooth_field_is_positive(self):
        coords = np.random.default_rng(2).uniform(size=(300, 2))
        graph = spatialgraph.knn_graph(coords, k=5)
        statistic = moran.local_moran(coords[:, 0], graph)
        self.assertGreater(statistic.mean(), 0)
        self.assertEqual(statistic.weight_scheme, 'row-standardized-knn')

class TestMoranTargets(unittest.TestCase):
    """Per batch auxiliary targets."""

    def test_whole_dataset_batch(self):
        rng = np.random.default_rng(3)
        coords = rng.uniform(size=(50, 2))
        y = rng.normal(size=50)
        graph = spatialgraph.knn_graph(coords, k=5)
        np.testing.assert_array_equal(moran.moran_target_for_batch(y, graph),
                                      moran.local_moran(y, graph).values)

    def test_batches_change_targets(self):
        rng = np.random.default_rng(4)
        coords = rng.uniform(size=(200, 2))
        y = rng.normal(size=200)
        values = []
        for seed in (10, 11):
            others = np.random.default_rng(seed).choice(np.arange(1, 200), 49, replace=False)
            batch = np.concatenate([[0], others])
            graph = spatialgraph.knn_graph(coords[batch], k=5)
            values.append(moran.moran_target_for_batch(y[batch], graph)[0])
        self.assertNotEqual(values[0], values[1])

    def test_constant_batch_fallback(self):
        graph = spatialgraph.knn_graph([[0, 0], [1, 0], [2, 0], [3, 1]], k=2)
        fallbacks = defaultdict(int)
        with self.assertLogs('pypegnn.moran.local', level='WARNING'):
            targets = moran.moran_target_for_batch([1.5] * 4, graph, fallbacks)
        np.testing.assert_array_equal(targets, np.zeros(4))
        self.assertEqual(fallbacks['constant_batch'], 1)
