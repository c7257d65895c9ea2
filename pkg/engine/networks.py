#!/usr/bin/python3
"""
Benchmark networks for the simulation harness.

Functions:
    build_block_ring_network: 12-node symmetric network with three candidates
    build_fmri_like_network: Seeded 20-node connected surrogate of a fitted connectome
    shrink_weights: Smooth edge weights towards their mean
"""
import logging
import string

import networkx as nx
import numpy as np

from models.graph import GraphSpec
from models.scenario import BenchmarkNetwork
from validators.validators import validate_positive_int, validate_seed

logger = logging.getLogger(__name__)

RING_WEIGHT = 0.5

# (a, b, c, candidate) per block; consecutive blocks are linked c -> next a
_RING_BLOCKS = (('A', 'B', 'C', 'D'), ('E', 'F', 'G', 'H'), ('I', 'J', 'K', 'L'))


def build_block_ring_network() -> BenchmarkNetwork:
    """
    12-node benchmark with candidates D, H and L.

    Three identical blocks a-b-c-cand form 4-cycles (a-b, b-c, a-cand,
    c-cand) and a ring joins the blocks (C-E, G-I, K-A), so every candidate
    has two participant neighbors and the update set is the whole graph.
    Every edge has weight 1/2.

    Returns:
        BenchmarkNetwork: Graph labeled A..L with candidates {3, 7, 11}
    """
    labels = tuple(string.ascii_uppercase[:12])
    index = {label: node for node, label in enumerate(labels)}
    edges = []
    for a, b, c, candidate in _RING_BLOCKS:
        edges += [(a, b), (b, c), (a, candidate), (c, candidate)]
    for block, following in zip(_RING_BLOCKS, _RING_BLOCKS[1:] + _RING_BLOCKS[:1]):
        edges.append((block[2], following[0]))

    graph = GraphSpec(
        p=len(labels),
        edges=tuple((index[s], index[t], RING_WEIGHT) for s, t in edges),
        labels=labels,
    )
    candidates = frozenset(index[block[3]] for block in _RING_BLOCKS)
    return BenchmarkNetwork(graph, candidates)


def shrink_weights(weights: np.ndarray, shrinkage: float) -> np.ndarray:
    """(1 - shrinkage) * w + shrinkage * mean(w)."""
    shrinkage = float(shrinkage)
    if not 0.0 <= shrinkage <= 1.0:
        raise ValueError("Shrinkage must lie in [0, 1]")
    weights = np.asarray(weights, dtype=float)
    if weights.size == 0:
        return weights
    return (1.0 - shrinkage) * weights + shrinkage * weights.mean()


def build_fmri_like_network(p_target: int = 20, shrinkage: float = 0.5, seed: int = 0,
                            max_degree: int = 5, extra_edges: int = None, candidates: int = 4,
                            weight_range=(0.3, 1.2)) -> BenchmarkNetwork:
    """
    Seeded connected surrogate of a fitted 20-node connectome.

    A random spanning tree (each node attached to an earlier node with
    free degree) guarantees a single component; extra random edges are
    then added under the degree cap. Positive weights are drawn uniformly
    from weight_range and shrunk towards their mean.

    Only the degree cap is matched. The fitted connectome's degree
    sequence is not available, so its profile is not reproduced: degrees
    follow from the random tree and the extra edges. Results on this
    network describe a sparse connected graph of the right size and
    maximum degree, not the fitted connectome itself.

    Args:
        p_target: Node count
        shrinkage: 0 keeps the drawn weights, 1 makes them all equal
        seed: Random seed
        max_degree: Degree cap
        extra_edges: Edges beyond the tree (default p_target // 3)
        candidates: Number of candidate nodes
        weight_range: Bounds of the drawn weights

    Returns:
        BenchmarkNetwork: Graph labeled R0..R{p-1} with seeded candidates
    """
    p = validate_positive_int(p_target, "Node count", minimum=2)
    max_degree = validate_positive_int(max_degree, "Maximum degree", minimum=2)
    count = validate_positive_int(candidates, "Candidate count", minimum=0)
    if count > p:
        raise ValueError(f"Cannot choose {count} candidates among {p} nodes")
    extra = p // 3 if extra_edges is None else validate_positive_int(extra_edges, "Extra edges", minimum=0)
    rng = np.random.default_rng(validate_seed(seed))

    graph = nx.Graph()
    graph.add_nodes_from(range(p))
    for node in range(1, p):
        open_nodes = [s for s in range(node) if graph.degree(s) < max_degree]
        graph.add_edge(node, int(rng.choice(open_nodes)))

    free = [(s, t) for s in range(p) for t in range(s + 1, p) if not graph.has_edge(s, t)]
    for position in rng.permutation(len(free)):
        if extra == 0:
            break
        s, t = free[position]
        if graph.degree(s) < max_degree and graph.degree(t) < max_degree:
            graph.add_edge(s, t)
            extra -= 1

    edges = sorted((min(s, t), max(s, t)) for s, t in graph.edges())
    weights = shrink_weights(rng.uniform(*weight_range, size=len(edges)), shrinkage)
    chosen = frozenset(int(s) for s in rng.choice(p, size=count, replace=False))
    if not nx.is_connected(graph):
        raise RuntimeError("Surrogate network is not connected")
    logger.debug(f"Surrogate network: p={p}, {len(edges)} edges, candidates {sorted(chosen)}")

    spec = GraphSpec(
        p=p,
        edges=tuple((s, t, float(w)) for (s, t), w in zip(edges, weights)),
        labels=tuple(f"R{node}" for node in range(p)),
    )
    return BenchmarkNetwork(spec, chosen)
