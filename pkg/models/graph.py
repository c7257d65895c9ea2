#!/usr/bin/python3
"""
This module defines the graph containers and graph queries.

GraphSpec holds a weighted undirected edge list (ground truth or an
estimate with weights), EdgeSetEstimate holds an unweighted edge set and
NodePartition describes the candidate/participant/update-set split used
by the EM refinement.

Classes:
    GraphSpec: Node count plus weighted undirected edges
    EdgeSetEstimate: Node count plus unweighted undirected edges
    NodePartition: Candidate, participant and update sets with components
    EdgeMetrics: Confusion counts and rates of an edge-set comparison

Functions:
    neighbors: Closed neighborhood of a node set
    update_partition: Build the update set N(N(C)) and its components
    edge_metrics: Compare an estimate with the truth over a node class
"""
import math
from dataclasses import dataclass, field
from itertools import combinations
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple, Union

import networkx as nx
import numpy as np

from validators.validators import validate_node, validate_nodes

Edge = Tuple[int, int]


def _canonical(s: int, t: int) -> Edge:
    return (s, t) if s < t else (t, s)


@dataclass(frozen=True)
class GraphSpec:
    """
    Weighted undirected graph on nodes 0..p-1.

    Attributes:
        p (int): Node count
        edges (tuple): (s, t, weight) triples stored with s < t, sorted
        labels (tuple): Optional node names, one per node
    """
    p: int
    edges: Tuple[Tuple[int, int, float], ...] = ()
    labels: Optional[Tuple[str, ...]] = None

    def __post_init__(self):
        if self.p < 1:
            raise ValueError("Graph must have at least one node")
        seen = {}
        for s, t, weight in self.edges:
            s, t = validate_node(s, self.p), validate_node(t, self.p)
            if s == t:
                raise ValueError(f"Self-loop on node {s} is not allowed")
            weight = float(weight)
            if not math.isfinite(weight):
                raise ValueError(f"Edge ({s}, {t}) has a non-finite weight")
            if weight == 0:
                raise ValueError(f"Edge ({s}, {t}) has zero weight")
            key = _canonical(s, t)
            if key in seen:
                raise ValueError(f"Duplicate edge {key}")
            seen[key] = weight
        object.__setattr__(self, 'edges', tuple((s, t, w) for (s, t), w in sorted(seen.items())))
        if self.labels is not None:
            if len(self.labels) != self.p:
                raise ValueError("Label count must equal the node count")
            object.__setattr__(self, 'labels', tuple(str(label) for label in self.labels))

    @property
    def edge_pairs(self) -> FrozenSet[Edge]:
        """Unweighted edge set."""
        return frozenset((s, t) for s, t, _ in self.edges)

    def weight_matrix(self) -> np.ndarray:
        """Symmetric p x p matrix of edge weights with zero diagonal."""
        theta = np.zeros((self.p, self.p))
        for s, t, weight in self.edges:
            theta[s, t] = theta[t, s] = weight
        return theta

    def degrees(self) -> np.ndarray:
        """Node degrees."""
        degree = np.zeros(self.p, dtype=int)
        for s, t, _ in self.edges:
            degree[s] += 1
            degree[t] += 1
        return degree

    def max_degree(self) -> int:
        return int(self.degrees().max()) if self.edges else 0

    def node_name(self, node: int) -> str:
        return self.labels[node] if self.labels else str(node)

    def to_dict(self) -> dict:
        data = {'p': self.p, 'edges': [[s, t, w] for s, t, w in self.edges]}
        if self.labels:
            data['labels'] = list(self.labels)
        return data

    @classmethod
    def from_dict(cls, data: dict) -> 'GraphSpec':
        try:
            edges = tuple((int(e[0]), int(e[1]), float(e[2])) for e in data.get('edges', []))
            labels = data.get('labels')
            return cls(int(data['p']), edges, tuple(labels) if labels else None)
        except (KeyError, IndexError, TypeError) as e:
            raise ValueError(f"Malformed graph description: {e}")


@dataclass(frozen=True)
class EdgeSetEstimate:
    """
    Unweighted undirected edge set on nodes 0..p-1.

    Attributes:
        p (int): Node count
        edges (frozenset): Canonical (s, t) pairs with s < t
    """
    p: int
    edges: FrozenSet[Edge] = frozenset()

    def __post_init__(self):
        canonical = set()
        for s, t in self.edges:
            s, t = validate_node(s, self.p), validate_node(t, self.p)
            if s == t:
                raise ValueError(f"Self-loop on node {s} is not allowed")
            canonical.add(_canonical(s, t))
        object.__setattr__(self, 'edges', frozenset(canonical))

    @property
    def edge_pairs(self) -> FrozenSet[Edge]:
        return self.edges

    @classmethod
    def from_graph(cls, graph: GraphSpec) -> 'EdgeSetEstimate':
        return cls(graph.p, graph.edge_pairs)

    @classmethod
    def from_coefficients(cls, coefficients: np.ndarray, aggregation: str = 'and') -> 'EdgeSetEstimate':
        """
        Aggregate node-wise coefficient rows into an edge set.

        Args:
            coefficients: p x p matrix, row r holding node r's regression
            aggregation: 'and' (both directions nonzero) or 'or' (either)

        Returns:
            EdgeSetEstimate: Aggregated edge set
        """
        support = coefficients != 0
        np.fill_diagonal(support, False)
        both = support & support.T if aggregation == 'and' else support | support.T
        rows, cols = np.nonzero(np.triu(both, k=1))
        return cls(coefficients.shape[0], frozenset(zip(rows.tolist(), cols.tolist())))

    def adjacency(self) -> np.ndarray:
        matrix = np.zeros((self.p, self.p), dtype=int)
        for s, t in self.edges:
            matrix[s, t] = matrix[t, s] = 1
        return matrix

    def to_dict(self) -> dict:
        return {'p': self.p, 'edges': [list(edge) for edge in sorted(self.edges)]}

    @classmethod
    def from_dict(cls, data: dict) -> 'EdgeSetEstimate':
        try:
            return cls(int(data['p']), frozenset((int(e[0]), int(e[1])) for e in data.get('edges', [])))
        except (KeyError, IndexError, TypeError) as e:
            raise ValueError(f"Malformed edge set description: {e}")


@dataclass(frozen=True)
class NodePartition:
    """
    Split of the update set into candidates and participants.

    Attributes:
        candidates (frozenset): Nodes treated as latent (C)
        participants (frozenset): U \\ C
        update_set (frozenset): U = N(N(C))
        components (tuple): Connected components of the subgraph induced by U,
            ordered by smallest member
    """
    candidates: FrozenSet[int]
    participants: FrozenSet[int]
    update_set: FrozenSet[int]
    components: Tuple[FrozenSet[int], ...] = field(default_factory=tuple)

    @property
    def candidate_counts(self) -> Tuple[int, ...]:
        """Candidate count c of each component."""
        return tuple(len(component & self.candidates) for component in self.components)

    @property
    def c_max(self) -> int:
        return max(self.candidate_counts, default=0)

    def component_of(self, node: int) -> FrozenSet[int]:
        for component in self.components:
            if node in component:
                return component
        raise ValueError(f"Node {node} is not in the update set")

    def to_dict(self) -> dict:
        return {
            'candidates': sorted(self.candidates),
            'participants': sorted(self.participants),
            'update_set': sorted(self.update_set),
            'components': [
                {'nodes': sorted(component), 'candidate_count': count}
                for component, count in zip(self.components, self.candidate_counts)
            ],
        }


@dataclass(frozen=True)
class EdgeMetrics:
    """
    Confusion counts of an edge-set comparison over unordered node pairs.

    Rates use 0 when their denominator is empty.
    """
    tp: int
    fp: int
    tn: int
    fn: int

    @property
    def pairs(self) -> int:
        return self.tp + self.fp + self.tn + self.fn

    @property
    def tpr(self) -> float:
        return self.tp / (self.tp + self.fn) if self.tp + self.fn else 0.0

    @property
    def fnr(self) -> float:
        return self.fn / (self.tp + self.fn) if self.tp + self.fn else 0.0

    @property
    def fpr(self) -> float:
        return self.fp / (self.fp + self.tn) if self.fp + self.tn else 0.0

    @property
    def tnr(self) -> float:
        return self.tn / (self.fp + self.tn) if self.fp + self.tn else 0.0

    @property
    def error_rate(self) -> float:
        """(FP + FN) over all compared pairs."""
        return (self.fp + self.fn) / self.pairs if self.pairs else 0.0

    def to_dict(self) -> dict:
        return {
            'tp': self.tp, 'fp': self.fp, 'tn': self.tn, 'fn': self.fn,
            'tpr': self.tpr, 'fpr': self.fpr, 'tnr': self.tnr, 'fnr': self.fnr,
            'error_rate': self.error_rate,
        }


GraphLike = Union[GraphSpec, EdgeSetEstimate]


def _adjacency_lists(graph: GraphLike) -> Dict[int, set]:
    adjacent = {node: set() for node in range(graph.p)}
    for s, t in graph.edge_pairs:
        adjacent[s].add(t)
        adjacent[t].add(s)
    return adjacent


def neighbors(graph: GraphLike, nodes: Iterable[int]) -> FrozenSet[int]:
    """
    Closed neighborhood N(S): the input nodes plus every node adjacent to one of them.

    Args:
        graph: GraphSpec or EdgeSetEstimate
        nodes: Node set S

    Returns:
        frozenset: N(S), always a superset of S

    Raises:
        ValueError: If a node index is out of range
    """
    members = validate_nodes(nodes, graph.p)
    adjacent = _adjacency_lists(graph)
    closure = set(members)
    for node in members:
        closure |= adjacent[node]
    return frozenset(closure)


def update_partition(edges: GraphLike, candidates: Iterable[int]) -> NodePartition:
    """
    Build the EM update set U = N(N(C)) and split it into components.

    Args:
        edges: Estimated (or true) edge set
        candidates: Candidate nodes C

    Returns:
        NodePartition: Candidates, participants P = U \\ C, U and the connected
            components of the subgraph induced by U
    """
    candidates = validate_nodes(candidates, edges.p)
    update_set = neighbors(edges, neighbors(edges, candidates))

    induced = nx.Graph()
    induced.add_nodes_from(sorted(update_set))
    induced.add_edges_from((s, t) for s, t in sorted(edges.edge_pairs)
                           if s in update_set and t in update_set)
    components = sorted((frozenset(c) for c in nx.connected_components(induced)), key=min)

    return NodePartition(
        candidates=candidates,
        participants=update_set - candidates,
        update_set=update_set,
        components=tuple(components),
    )


def edge_metrics(estimate: GraphLike, truth: GraphLike, node_class: Optional[Iterable[int]] = None,
                 exclude: Optional[Iterable[int]] = None) -> EdgeMetrics:
    """
    Count TP/FP/TN/FN over unordered pairs touching a node class.

    A pair is compared when at least one endpoint lies in node_class (all
    nodes when omitted) and, if exclude is given, neither endpoint lies in it.

    Args:
        estimate: Estimated edge set
        truth: True graph
        node_class: Nodes whose pairs are compared
        exclude: Nodes whose pairs are skipped

    Returns:
        EdgeMetrics: Confusion counts

    Raises:
        ValueError: If the node counts differ
    """
    if estimate.p != truth.p:
        raise ValueError(f"Node count mismatch: estimate p={estimate.p}, truth p={truth.p}")
    p = truth.p
    members = validate_nodes(range(p) if node_class is None else node_class, p)
    skipped = validate_nodes(exclude or (), p)
    estimated, true_edges = estimate.edge_pairs, truth.edge_pairs

    tp = fp = tn = fn = 0
    for pair in combinations(range(p), 2):
        if not (pair[0] in members or pair[1] in members):
            continue
        if pair[0] in skipped or pair[1] in skipped:
            continue
        selected, present = pair in estimated, pair in true_edges
        if present and selected:
            tp += 1
        elif present:
            fn += 1
        elif selected:
            fp += 1
        else:
            tn += 1
    return EdgeMetrics(tp, fp, tn, fn)


def node_error_rates(estimate: GraphLike, truth: GraphLike) -> np.ndarray:
    """Per-node share of incident pairs that are misclassified (FP + FN)."""
    if estimate.p != truth.p:
        raise ValueError(f"Node count mismatch: estimate p={estimate.p}, truth p={truth.p}")
    if truth.p < 2:
        return np.zeros(truth.p)
    wrong = EdgeSetEstimate(truth.p, estimate.edge_pairs ^ truth.edge_pairs).adjacency()
    return wrong.sum(axis=1) / (truth.p - 1)
