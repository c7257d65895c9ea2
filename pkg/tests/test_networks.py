#!/usr/bin/python3
"""
Benchmark networks unittest module
"""

import unittest

import networkx as nx
import numpy as np

from engine.networks import build_block_ring_network, build_fmri_like_network, shrink_weights
from models.graph import neighbors, update_partition


class BlockRingNetworkTests(unittest.TestCase):
    """Symmetric 12-node benchmark."""

    def setUp(self):
        self.network = build_block_ring_network()
        self.graph = self.network.graph

    def test_shape(self):
        self.assertEqual(self.graph.p, 12)
        self.assertEqual(len(self.graph.edges), 15)
        self.assertTrue(all(weight == 0.5 for _, _, weight in self.graph.edges))
        self.assertEqual(self.graph.labels, tuple('ABCDEFGHIJKL'))

    def test_candidates(self):
        self.assertEqual(self.network.candidates, frozenset({3, 7, 11}))
        for candidate in self.network.candidates:
            self.assertEqual(self.graph.degrees()[candidate], 2)
            self.assertTrue(neighbors(self.graph, [candidate]).isdisjoint(self.network.candidates - {candidate}))

    def test_update_set_is_whole_graph(self):
        partition = update_partition(self.graph, self.network.candidates)
        self.assertEqual(partition.update_set, frozenset(range(12)))
        self.assertEqual(len(partition.components), 1)
        self.assertEqual(partition.c_max, 3)

    def test_blocks_are_linked_in_a_ring(self):
        names = {(self.graph.node_name(s), self.graph.node_name(t)) for s, t in self.graph.edge_pairs}
        self.assertTrue({('C', 'E'), ('G', 'I'), ('A', 'K')} <= names)


class FmriLikeNetworkTests(unittest.TestCase):
    """Seeded connected surrogate network."""

    def test_structure(self):
        network = build_fmri_like_network(seed=11)
        graph = network.graph
        self.assertEqual(graph.p, 20)
        self.assertEqual(len(network.candidates), 4)
        self.assertLessEqual(graph.max_degree(), 5)
        self.assertEqual(graph.labels[0], 'R0')
        self.assertEqual(len(graph.edges), 19 + 20 // 3)
        connected = nx.Graph(list(graph.edge_pairs))
        connected.add_nodes_from(range(graph.p))
        self.assertTrue(nx.is_connected(connected))

    def test_degree_cap_holds_across_seeds(self):
        for seed in range(10):
            for cap in (2, 3, 5):
                graph = build_fmri_like_network(seed=seed, max_degree=cap).graph
                self.assertLessEqual(graph.max_degree(), cap, msg=f"seed {seed}, cap {cap}")
                self.assertGreaterEqual(int(graph.degrees().min()), 1)

    def test_weights_are_shrunk_within_range(self):
        weights = np.array([w for _, _, w in build_fmri_like_network(seed=3, shrinkage=0.5).graph.edges])
        self.assertTrue(np.all((weights >= 0.3) & (weights <= 1.2)))
        raw = np.array([w for _, _, w in build_fmri_like_network(seed=3, shrinkage=0.0).graph.edges])
        self.assertLess(weights.std(), raw.std())

    def test_deterministic_per_seed(self):
        self.assertEqual(build_fmri_like_network(seed=5), build_fmri_like_network(seed=5))
        self.assertNotEqual(build_fmri_like_network(seed=5).graph, build_fmri_like_network(seed=6).graph)

    def test_invalid_arguments(self):
        with self.assertRaises(ValueError):
            build_fmri_like_network(p_target=3, candidates=4)
        with self.assertRaises(ValueError):
            build_fmri_like_network(shrinkage=1.5)


class ShrinkWeightsTests(unittest.TestCase):
    """Shrinkage towards the mean."""

    def test_endpoints(self):
        weights = np.array([0.2, 0.6, 1.0])
        np.testing.assert_allclose(shrink_weights(weights, 0.0), weights)
        np.testing.assert_allclose(shrink_weights(weights, 1.0), np.full(3, 0.6))
        np.testing.assert_allclose(shrink_weights(weights, 0.5), [0.4, 0.6, 0.8])

    def test_invalid_shrinkage(self):
        with self.assertRaises(ValueError):
            shrink_weights(np.ones(2), -0.1)


if __name__ == '__main__':
    unittest.main()
