#!/usr/bin/python3
"""
This module defines simulation scenarios and their results.

Scenario JSON schema (keys not listed are rejected):

    {
      "name": "block_ring",                       optional, default "scenario"
      "network": {"builtin": "block_ring"}
               | {"builtin": "fmri_like", "p": 20, "shrinkage": 0.5, "seed": 11}
               | {"graph": <GraphSpec JSON>, "candidates": [..]},
      "n": 60,
      "replications": 1000,
      "first_replication": 0,                  optional, index of the first replication
      "seed": 2017,
      "law": {"scheme": "halfObservations", "within_prob": 0.6, "nodes": [..]}
           | {"scheme": "perNode", "gammas": [..]},
      "candidates": [3, 7, 11] | {"threshold": 0.1},   optional, default network candidates
      "lambda_grid": [..],                     optional, default 30 log-spaced values
      "estimators": ["RWL", "RWL_WEIGHTED", "RWL_EM1", "WEIGHTED_EM1", "RWL_EM3"],
      "aggregation": "and",
      "sampler": {"method": "exact", "burn_in": 1000, "thin": 10}
    }

"nodes" of a halfObservations law defaults to the candidate list.

Classes:
    BenchmarkNetwork: True graph with its candidate nodes
    LawScheme: How each replication's misclassification law is built
    EstimatorSpec: One estimator of the comparison
    ScenarioConfig: Complete scenario description
    MetricsRecord: Edge-recovery counts of one estimator/lambda/replication/class
    ReplicationOutcome: Everything one replication produced
    ScenarioResult: Records plus aggregates of a scenario run
"""
import re
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, List, Optional, Tuple, Union

import numpy as np

from models.graph import EdgeMetrics, GraphSpec
from validators.validators import (
    validate_aggregation,
    validate_gammas,
    validate_lambda_grid,
    validate_nodes,
    validate_positive_int,
    validate_seed
)

NODE_CLASSES = ('candidate', 'participant', 'other')

SCENARIO_KEYS = {
    'name', 'network', 'n', 'replications', 'first_replication', 'seed', 'law',
    'candidates', 'lambda_grid', 'estimators', 'aggregation', 'sampler',
}

_ESTIMATOR_PATTERN = re.compile(r'^(RWL|RWL_WEIGHTED|RWL_EM(\d+)|WEIGHTED_EM(\d+))$')


@dataclass(frozen=True)
class BenchmarkNetwork:
    """
    Benchmark network.

    Attributes:
        graph (GraphSpec): True graph with weights and labels
        candidates (frozenset): Nodes misclassified in the benchmark
    """
    graph: GraphSpec
    candidates: FrozenSet[int]

    def __post_init__(self):
        object.__setattr__(self, 'candidates', validate_nodes(self.candidates, self.graph.p))

    def to_dict(self) -> dict:
        return {'graph': self.graph.to_dict(), 'candidates': sorted(self.candidates)}


@dataclass(frozen=True)
class LawScheme:
    """
    Misclassification scheme of a scenario.

    Attributes:
        scheme (str): 'perNode' or 'halfObservations'
        gammas (tuple): Per-node probabilities (perNode)
        within_prob (float): Flip probability inside the chosen half (halfObservations)
        nodes (frozenset): Misclassified nodes (halfObservations)
    """
    scheme: str
    gammas: Tuple[float, ...] = ()
    within_prob: float = 0.0
    nodes: FrozenSet[int] = frozenset()

    @classmethod
    def from_dict(cls, data: dict, p: int, default_nodes: FrozenSet[int]) -> 'LawScheme':
        scheme = data.get('scheme')
        if scheme == 'perNode':
            gammas = validate_gammas(data.get('gammas', ()))
            if gammas.shape != (p,):
                raise ValueError(f"perNode law needs {p} probabilities, got {gammas.size}")
            return cls('perNode', gammas=tuple(float(g) for g in gammas))
        if scheme == 'halfObservations':
            within = float(validate_gammas([data.get('within_prob', 0.0)])[0])
            nodes = validate_nodes(data.get('nodes', sorted(default_nodes)), p)
            return cls('halfObservations', within_prob=within, nodes=nodes)
        raise ValueError(f"Unknown misclassification scheme: {scheme!r}")

    def to_dict(self) -> dict:
        if self.scheme == 'perNode':
            return {'scheme': self.scheme, 'gammas': list(self.gammas)}
        return {'scheme': self.scheme, 'within_prob': self.within_prob, 'nodes': sorted(self.nodes)}


@dataclass(frozen=True)
class EstimatorSpec:
    """
    Estimator of the comparison.

    Attributes:
        name (str): RWL, RWL_WEIGHTED, RWL_EM<k> or WEIGHTED_EM<k>
        base (str): 'RWL' or 'RWL_WEIGHTED', the initial fit
        em_iterations (int): EM updates after the initial fit (0 for none)
    """
    name: str
    base: str
    em_iterations: int = 0

    @classmethod
    def parse(cls, name: str) -> 'EstimatorSpec':
        match = _ESTIMATOR_PATTERN.match(str(name))
        if not match:
            raise ValueError(f"Unknown estimator: {name!r}")
        if match.group(2):
            return cls(name, 'RWL', validate_positive_int(int(match.group(2)), "EM iterations"))
        if match.group(3):
            return cls(name, 'RWL_WEIGHTED', validate_positive_int(int(match.group(3)), "EM iterations"))
        return cls(name, name)

    @property
    def is_em(self) -> bool:
        return self.em_iterations > 0


@dataclass(frozen=True)
class ScenarioConfig:
    """
    Simulation scenario.

    Attributes:
        name (str): Scenario name
        network (BenchmarkNetwork): True graph and its default candidates
        n (int): Observations per replication
        replications (int): Replication count
        seed (int): Scenario seed; replication i uses seed XOR i
        law (LawScheme): Misclassification scheme
        candidates (frozenset or float): Explicit candidates or a threshold q
        lambda_grid (tuple): Descending penalties
        estimators (tuple): EstimatorSpec per compared estimator
        aggregation (str): AND/OR rule of every RWL fit
        sampler (str): 'exact' or 'gibbs'
        burn_in (int): Gibbs burn-in sweeps (None for the settings default)
        thin (int): Gibbs thinning sweeps (None for the settings default)
        first_replication (int): Index of the first replication
    """
    name: str
    network: BenchmarkNetwork
    n: int
    replications: int
    seed: int
    law: LawScheme
    candidates: Union[FrozenSet[int], float]
    lambda_grid: Tuple[float, ...]
    estimators: Tuple[EstimatorSpec, ...]
    aggregation: str = 'and'
    sampler: str = 'exact'
    burn_in: Optional[int] = None
    thin: Optional[int] = None
    first_replication: int = 0

    def __post_init__(self):
        validate_positive_int(self.n, "Sample size", minimum=2)
        validate_positive_int(self.replications, "Replications")
        validate_positive_int(self.first_replication, "First replication", minimum=0)
        if not self.lambda_grid:
            raise ValueError("Lambda grid cannot be empty")
        if not self.estimators:
            raise ValueError("At least one estimator is required")
        names = [spec.name for spec in self.estimators]
        if len(set(names)) != len(names):
            raise ValueError("Estimators must be unique")
        if self.sampler not in ('exact', 'gibbs'):
            raise ValueError(f"Unknown sampling method: {self.sampler!r}")

    @property
    def graph(self) -> GraphSpec:
        return self.network.graph

    @property
    def replication_indices(self) -> range:
        return range(self.first_replication, self.first_replication + self.replications)

    @classmethod
    def from_dict(cls, data: dict, network: BenchmarkNetwork, default_grid: List[float]) -> 'ScenarioConfig':
        """
        Build a scenario from its JSON description.

        Args:
            data: Parsed scenario JSON
            network: Resolved benchmark network
            default_grid: Grid used when the description has none

        Returns:
            ScenarioConfig: Validated scenario

        Raises:
            ValueError: For unknown keys or invalid values
        """
        unknown = set(data) - SCENARIO_KEYS
        if unknown:
            raise ValueError(f"Unknown scenario keys: {sorted(unknown)}")
        try:
            p = network.graph.p
            rule = data.get('candidates')
            if rule is None:
                candidates = network.candidates
            elif isinstance(rule, dict):
                candidates = float(validate_gammas([rule['threshold']])[0])
            else:
                candidates = validate_nodes(rule, p)
            default_nodes = candidates if isinstance(candidates, frozenset) else network.candidates

            sampler = data.get('sampler', {})
            return cls(
                name=str(data.get('name', 'scenario')),
                network=network,
                n=int(data['n']),
                replications=int(data['replications']),
                seed=validate_seed(data.get('seed', 0)),
                law=LawScheme.from_dict(data['law'], p, default_nodes),
                candidates=candidates,
                lambda_grid=tuple(validate_lambda_grid(data.get('lambda_grid') or default_grid)),
                estimators=tuple(EstimatorSpec.parse(name) for name in data.get('estimators', ['RWL', 'RWL_EM1'])),
                aggregation=validate_aggregation(data.get('aggregation', 'and')),
                sampler=sampler.get('method', 'exact'),
                burn_in=sampler.get('burn_in'),
                thin=sampler.get('thin'),
                first_replication=int(data.get('first_replication', 0)),
            )
        except KeyError as e:
            raise ValueError(f"Scenario is missing {e}")
        except TypeError as e:
            raise ValueError(f"Malformed scenario: {e}")

    def to_dict(self) -> dict:
        if isinstance(self.candidates, frozenset):
            candidates = sorted(self.candidates)
        else:
            candidates = {'threshold': self.candidates}
        sampler = {'method': self.sampler}
        if self.burn_in is not None:
            sampler['burn_in'] = self.burn_in
        if self.thin is not None:
            sampler['thin'] = self.thin
        return {
            'name': self.name,
            'network': self.network.to_dict(),
            'n': self.n,
            'replications': self.replications,
            'first_replication': self.first_replication,
            'seed': self.seed,
            'law': self.law.to_dict(),
            'candidates': candidates,
            'lambda_grid': list(self.lambda_grid),
            'estimators': [spec.name for spec in self.estimators],
            'aggregation': self.aggregation,
            'sampler': sampler,
        }


@dataclass(frozen=True)
class MetricsRecord:
    """
    Edge-recovery counts of one estimator at one penalty, replication and node class.

    For EM estimators lam is the M-step penalty; the initial fit uses the
    replication's Youden penalty.
    """
    estimator: str
    lam: float
    replication: int
    node_class: str
    metrics: EdgeMetrics

    def to_row(self) -> dict:
        return {
            'estimator': self.estimator,
            'lambda': self.lam,
            'replication': self.replication,
            'node_class': self.node_class,
            **self.metrics.to_dict(),
        }


@dataclass(frozen=True, eq=False)
class ReplicationOutcome:
    """
    Output of one replication.

    Attributes:
        replication (int): Replication index
        seed (int): Replication seed
        records (tuple): MetricsRecord per estimator, penalty and node class
        matched_index (dict): Estimator -> grid index of its matched penalty
        selections (dict): Estimator -> p x p adjacency at the matched penalty
        node_errors (dict): Estimator -> per-node error rates at the matched penalty
        error (str): Failure message, None on success
    """
    replication: int
    seed: int
    records: Tuple[MetricsRecord, ...] = ()
    matched_index: Dict[str, int] = field(default_factory=dict)
    selections: Dict[str, np.ndarray] = field(default_factory=dict)
    node_errors: Dict[str, np.ndarray] = field(default_factory=dict)
    error: Optional[str] = None

    @property
    def failed(self) -> bool:
        return self.error is not None


@dataclass(frozen=True, eq=False)
class ScenarioResult:
    """
    Records and aggregates of a scenario run.

    Attributes:
        config (ScenarioConfig): The scenario
        node_classes (tuple): Node classes with at least one pair
        records (tuple): Records of successful replications, ordered by
            (replication, estimator, lambda, node class)
        roc (dict): (estimator, class) -> list of (lambda, mean FPR, mean TPR)
        auc (dict): (estimator, class) -> AUC
        matched_error (dict): (estimator, class) -> mean error rate at the matched penalty
        optimal (dict): (estimator, class) -> (lambda, mean error rate) minimizing the error
        selection_frequency (dict): Estimator -> p x p selection frequencies at the matched penalty
        node_error_rates (dict): Estimator -> mean per-node error rates at the matched penalty
        failures (tuple): (replication, seed, message) of failed replications
    """
    config: ScenarioConfig
    node_classes: Tuple[str, ...]
    records: Tuple[MetricsRecord, ...]
    roc: Dict[Tuple[str, str], List[Tuple[float, float, float]]]
    auc: Dict[Tuple[str, str], float]
    matched_error: Dict[Tuple[str, str], float]
    optimal: Dict[Tuple[str, str], Tuple[float, float]]
    selection_frequency: Dict[str, np.ndarray]
    node_error_rates: Dict[str, np.ndarray]
    failures: Tuple[Tuple[int, int, str], ...] = ()

    @property
    def completed(self) -> int:
        return self.config.replications - len(self.failures)

    def summary(self) -> dict:
        """AUC and error-rate aggregates keyed by estimator and node class."""
        summary = {}
        for spec in self.config.estimators:
            summary[spec.name] = {
                node_class: {
                    'auc': self.auc[(spec.name, node_class)],
                    'matched_error_rate': self.matched_error[(spec.name, node_class)],
                    'optimal_lambda': self.optimal[(spec.name, node_class)][0],
                    'optimal_error_rate': self.optimal[(spec.name, node_class)][1],
                }
                for node_class in self.node_classes
            }
        return {
            'name': self.config.name,
            'replications': self.config.replications,
            'completed': self.completed,
            'failed': len(self.failures),
            'estimators': summary,
        }
