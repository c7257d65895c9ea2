#!/usr/bin/python3
"""
Monte-Carlo comparison of edge-selection estimators.

Each replication samples Ising data from the true network, applies the
scenario's misclassification, fits every estimator along the penalty
grid and scores the selected edges per node class. EM estimators start
from the base fit whose penalty maximizes TPR + (1 - FPR) against the
truth and then sweep their M-step penalty over the grid.

Replications are independent given their seeds and run in a process
pool; results are reduced in replication order.

Functions:
    default_lambda_grid: Log-spaced grid scaled by sqrt(log p / n)
    youden_index: Grid position maximizing TPR + (1 - FPR)
    roc_auc: Area under a mean ROC curve
    node_class_specs: Node classes of a network and candidate set
    load_scenario: Scenario from its JSON description
    run_replication: One replication, failures captured
    run_scenario: Every replication plus aggregates
"""
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from itertools import repeat
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from scipy.integrate import trapezoid

from config.settings import thread_count
from engine.distributions import apply_misclassification, sample_ising
from engine.em import em_update
from engine.networks import build_block_ring_network, build_fmri_like_network
from engine.rwl import rwl_path, rwl_weighted_path
from models.graph import EdgeSetEstimate, GraphSpec, edge_metrics, node_error_rates, update_partition
from models.scenario import (
    NODE_CLASSES,
    BenchmarkNetwork,
    MetricsRecord,
    ReplicationOutcome,
    ScenarioConfig,
    ScenarioResult
)
from models.spins import MisclassLaw
from utils.seeding import replication_seed, stream_seeds
from validators.validators import validate_nodes, validate_positive_int

logger = logging.getLogger(__name__)

DEFAULT_GRID_SIZE = 30
DEFAULT_GRID_BOUNDS = (0.01, 1.5)


def default_lambda_grid(p: int, n: int, size: int = DEFAULT_GRID_SIZE,
                        bounds: Tuple[float, float] = DEFAULT_GRID_BOUNDS) -> List[float]:
    """Descending log-spaced grid on bounds * sqrt(log p / n)."""
    scale = math.sqrt(math.log(max(p, 2)) / validate_positive_int(n, "Sample size"))
    low, high = bounds
    return [float(value) for value in np.geomspace(high, low, validate_positive_int(size, "Grid size")) * scale]


def youden_index(estimates: Sequence[EdgeSetEstimate], truth: GraphSpec) -> int:
    """Position of the estimate maximizing TPR + (1 - FPR) over all pairs; ties go to the first."""
    if not estimates:
        raise ValueError("No estimates to choose from")
    scores = []
    for estimate in estimates:
        metrics = edge_metrics(estimate, truth)
        scores.append(metrics.tpr + 1.0 - metrics.fpr)
    return int(np.argmax(scores))


def roc_auc(fpr: Sequence[float], tpr: Sequence[float]) -> float:
    """
    Trapezoidal area under a ROC curve.

    The endpoints (0, 0) and (1, 1) are added and points are sorted by
    FPR, then TPR.
    """
    points = sorted(zip(fpr, tpr)) if len(fpr) else []
    points = [(0.0, 0.0)] + points + [(1.0, 1.0)]
    x, y = zip(*points)
    return float(trapezoid(y, x))


def node_class_specs(truth: GraphSpec, candidates: FrozenSet[int]) -> Dict[str, Tuple[FrozenSet[int], FrozenSet[int]]]:
    """
    Node classes used to attribute pairs, with candidate > participant > other priority.

    Participants come from the update set of the true graph. Classes
    without any pair are omitted.

    Returns:
        Dict[str, tuple]: Class name -> (class members, excluded nodes)
    """
    partition = update_partition(truth, candidates)
    all_nodes = frozenset(range(truth.p))
    specs = {
        'candidate': (partition.candidates, frozenset()),
        'participant': (partition.participants, partition.candidates),
        'other': (all_nodes - partition.update_set, partition.update_set),
    }
    return {
        name: spec for name, spec in specs.items()
        if spec[0] and edge_metrics(truth, truth, spec[0], spec[1]).pairs > 0
    }


def load_scenario(data: dict) -> ScenarioConfig:
    """
    Build a scenario from its JSON description (schema in models.scenario).

    Raises:
        ValueError: For an invalid description
    """
    if not isinstance(data, dict):
        raise ValueError("Scenario must be a JSON object")
    network_spec = data.get('network')
    if not isinstance(network_spec, dict):
        raise ValueError("Scenario needs a 'network' object")
    builtin = network_spec.get('builtin')
    if builtin == 'block_ring':
        network = build_block_ring_network()
    elif builtin == 'fmri_like':
        network = build_fmri_like_network(
            p_target=network_spec.get('p', 20),
            shrinkage=network_spec.get('shrinkage', 0.5),
            seed=network_spec.get('seed', 0),
        )
    elif builtin is None and 'graph' in network_spec:
        graph = GraphSpec.from_dict(network_spec['graph'])
        network = BenchmarkNetwork(graph, frozenset(network_spec.get('candidates', ())))
    else:
        raise ValueError(f"Unknown network: {network_spec!r}")
    try:
        n = int(data['n'])
    except (KeyError, TypeError, ValueError):
        raise ValueError("Scenario needs an integer 'n'")
    return ScenarioConfig.from_dict(data, network, default_lambda_grid(network.graph.p, n))


def _replication_law(config: ScenarioConfig, seeds: Dict[str, int]) -> MisclassLaw:
    if config.law.scheme == 'perNode':
        return MisclassLaw.per_node(config.law.gammas)
    return MisclassLaw.half_observations(config.n, config.graph.p, config.law.nodes,
                                         config.law.within_prob, seeds['half_rows'])


def _candidates(config: ScenarioConfig, law: MisclassLaw) -> FrozenSet[int]:
    if isinstance(config.candidates, frozenset):
        return config.candidates
    return validate_nodes(law.candidates_above(config.candidates), config.graph.p)


def _replicate(config: ScenarioConfig, replication: int, seed: int) -> ReplicationOutcome:
    seeds = stream_seeds(seed)
    truth = config.graph
    grid = list(config.lambda_grid)
    clean = sample_ising(truth, config.n, config.sampler, seeds['sampling'], config.burn_in, config.thin)
    law = _replication_law(config, seeds)
    data = apply_misclassification(clean, law, seeds['flips'])
    candidates = _candidates(config, law)
    classes = node_class_specs(truth, candidates)

    bases = {spec.base for spec in config.estimators}
    paths = {}
    if 'RWL' in bases:
        paths['RWL'] = rwl_path(data, grid, config.aggregation)
    if 'RWL_WEIGHTED' in bases:
        paths['RWL_WEIGHTED'] = rwl_weighted_path(data, grid, law, candidates, config.aggregation)
    youden = {base: youden_index([fit.edge_set for fit in path], truth) for base, path in paths.items()}

    # one EM run per base and penalty at the largest requested iteration count
    histories = {}
    for base in sorted(bases):
        iterations = max((spec.em_iterations for spec in config.estimators if spec.base == base), default=0)
        if iterations == 0:
            continue
        initial = paths[base][youden[base]]
        histories[base] = []
        for lam in grid:
            state, edges = em_update(initial, data, law, candidates, lam, iterations)
            histories[base].append(state.edge_history or (edges,) * iterations)

    records, selections, errors, matched = [], {}, {}, {}
    for spec in config.estimators:
        if spec.is_em:
            estimates = [history[spec.em_iterations - 1] for history in histories[spec.base]]
        else:
            estimates = [fit.edge_set for fit in paths[spec.base]]
        matched[spec.name] = youden[spec.base]
        for lam, estimate in zip(grid, estimates):
            for name in NODE_CLASSES:
                if name not in classes:
                    continue
                members, excluded = classes[name]
                metrics = edge_metrics(estimate, truth, members, excluded)
                records.append(MetricsRecord(spec.name, lam, replication, name, metrics))
        chosen = estimates[matched[spec.name]]
        selections[spec.name] = chosen.adjacency()
        errors[spec.name] = node_error_rates(chosen, truth)
    return ReplicationOutcome(replication, seed, tuple(records), matched, selections, errors)


def run_replication(config: ScenarioConfig, replication: int) -> ReplicationOutcome:
    """
    Run one replication.

    Any failure is captured in the outcome together with the replication
    seed so that it can be replayed; it never propagates.

    Args:
        config: Scenario
        replication: Replication index

    Returns:
        ReplicationOutcome: Records and matched-penalty data, or the error
    """
    seed = replication_seed(config.seed, replication)
    try:
        outcome = _replicate(config, replication, seed)
    except Exception as e:
        logger.error(f"Replication {replication} (seed {seed}) failed: {e}")
        return ReplicationOutcome(replication, seed, error=f"{type(e).__name__}: {e}")
    logger.debug(f"Replication {replication} completed")
    return outcome


def _aggregate(config: ScenarioConfig, outcomes: List[ReplicationOutcome]) -> ScenarioResult:
    successes = [outcome for outcome in outcomes if not outcome.failed]
    failures = tuple((o.replication, o.seed, o.error) for o in outcomes if o.failed)
    records = tuple(record for outcome in successes for record in outcome.records)
    grid = list(config.lambda_grid)
    present = {record.node_class for record in records}
    node_classes = tuple(name for name in NODE_CLASSES if name in present)

    frame = pd.DataFrame(
        [(r.estimator, r.node_class, r.lam, r.replication, r.metrics.tpr, r.metrics.fpr, r.metrics.error_rate)
         for r in records],
        columns=['estimator', 'node_class', 'lambda', 'replication', 'tpr', 'fpr', 'error_rate'],
    )
    means = frame.groupby(['estimator', 'node_class', 'lambda'])[['tpr', 'fpr', 'error_rate']].mean()
    errors = {(r.replication, r.estimator, r.lam, r.node_class): r.metrics.error_rate for r in records}

    roc, auc, matched_error, optimal = {}, {}, {}, {}
    for spec in config.estimators:
        for name in node_classes:
            curve = [(lam, float(means.loc[(spec.name, name, lam), 'fpr']),
                      float(means.loc[(spec.name, name, lam), 'tpr'])) for lam in grid]
            roc[(spec.name, name)] = curve
            auc[(spec.name, name)] = roc_auc([point[1] for point in curve], [point[2] for point in curve])

            mean_errors = [float(means.loc[(spec.name, name, lam), 'error_rate']) for lam in grid]
            best = int(np.argmin(mean_errors))
            optimal[(spec.name, name)] = (grid[best], mean_errors[best])

            at_matched = [errors[(o.replication, spec.name, grid[o.matched_index[spec.name]], name)]
                          for o in successes]
            matched_error[(spec.name, name)] = float(np.mean(at_matched))

    p = config.graph.p
    selection_frequency, node_errors = {}, {}
    for spec in config.estimators:
        if successes:
            selection_frequency[spec.name] = np.mean([o.selections[spec.name] for o in successes], axis=0)
            node_errors[spec.name] = np.mean([o.node_errors[spec.name] for o in successes], axis=0)
        else:
            selection_frequency[spec.name] = np.full((p, p), np.nan)
            node_errors[spec.name] = np.full(p, np.nan)

    return ScenarioResult(
        config=config,
        node_classes=node_classes,
        records=records,
        roc=roc,
        auc=auc,
        matched_error=matched_error,
        optimal=optimal,
        selection_frequency=selection_frequency,
        node_error_rates=node_errors,
        failures=failures,
    )


def run_scenario(config: ScenarioConfig, threads: Optional[int] = None) -> ScenarioResult:
    """
    Run every replication of a scenario and aggregate.

    Args:
        config: Scenario
        threads: Worker processes (default ISINGMIS_THREADS, else 1)

    Returns:
        ScenarioResult: Records of successful replications, aggregates and failures
    """
    workers = thread_count() if threads is None else validate_positive_int(threads, "Threads")
    indices = list(config.replication_indices)
    logger.info(f"Scenario {config.name}: {len(indices)} replications, n={config.n}, "
                f"{len(config.lambda_grid)} penalties, {workers} worker(s)")
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            outcomes = list(pool.map(run_replication, repeat(config), indices))
    else:
        outcomes = [run_replication(config, index) for index in indices]

    result = _aggregate(config, outcomes)
    if result.failures:
        logger.warning(f"Scenario {config.name}: {len(result.failures)} replication(s) failed "
                       f"and are excluded from the aggregates")
    logger.info(f"Scenario {config.name} finished: {result.completed} replication(s) aggregated")
    return result
