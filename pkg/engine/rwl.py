#!/usr/bin/python3
"""
Neighborhood-based edge selection (RWL).

Every node r is regressed on all other nodes with an l1-penalized
logistic regression (response 1(x_r = 1), linear predictor 2 x' theta)
and the supports are combined with the AND or OR rule.

Functions:
    rwl_fit: Fit every node at one penalty and aggregate
    rwl_path: Fits along a descending penalty grid with warm starts
    prior_state_weights: Misclassification-only weights of candidate configurations
    prior_weight_table: The same weights for every observation
    rwl_weighted_fit: RWL on data expanded by prior weights
    rwl_weighted_path: RWL Weighted fits along a penalty grid
"""
import logging
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np

from engine import MissingGammaError
from engine.configurations import channel_log_factors, config_table, substitute_configurations
from engine.logreg import fit_l1_logistic
from models.estimates import LogRegProblem, RwlFit
from models.spins import MisclassLaw, SpinMatrix
from validators.validators import (
    validate_aggregation,
    validate_lambda,
    validate_lambda_grid,
    validate_nodes,
    validate_spins
)

logger = logging.getLogger(__name__)


def _weights_for_node(row_weights: Optional[np.ndarray], r: int, n: int) -> Optional[np.ndarray]:
    if row_weights is None:
        return None
    return row_weights if row_weights.ndim == 1 else row_weights[:, r]


def _check_row_weights(row_weights, n: int, p: int) -> Optional[np.ndarray]:
    if row_weights is None:
        return None
    weights = np.asarray(row_weights, dtype=float)
    if weights.shape not in ((n,), (n, p)):
        raise ValueError(f"Row weights have shape {weights.shape}, expected ({n},) or ({n}, {p})")
    if not np.all(np.isfinite(weights)) or np.any(weights < 0):
        raise ValueError("Row weights must be finite and non-negative")
    return weights


def node_problem(values: np.ndarray, r: int, lam: float, weights: Optional[np.ndarray] = None) -> LogRegProblem:
    """Regression of node r on every other column of the observations."""
    others = [s for s in range(values.shape[1]) if s != r]
    return LogRegProblem(values[:, others], values[:, r], lam, sample_weights=weights)


def _assemble(p: int, lam: float, aggregation: str, solutions) -> RwlFit:
    theta = np.zeros((p, p))
    diagnostics = []
    for r, solution in enumerate(solutions):
        others = [s for s in range(p) if s != r]
        theta[r, others] = solution.coefficients
        diagnostics.append({'node': r, **solution.to_dict()})
        if not solution.converged:
            logger.warning(f"Node {r} regression did not converge at lambda={lam:.6g}")
    return RwlFit.from_coefficients(theta, lam, aggregation, tuple(diagnostics))


def rwl_fit(data: SpinMatrix, lam: float, aggregation: str = 'and', row_weights=None,
            tolerance: Optional[float] = None, max_iter: Optional[int] = None,
            warm_start: Optional[np.ndarray] = None) -> RwlFit:
    """
    Fit the RWL estimator at one penalty.

    Args:
        data: n x p observations
        lam: Penalty shared by all node regressions
        aggregation: 'and' (default) or 'or'
        row_weights: Optional weights, length n (all nodes) or n x p (per node)
        tolerance: Solver KKT tolerance
        max_iter: Solver sweep limit
        warm_start: Optional p x p coefficient matrix to start from

    Returns:
        RwlFit: Neighborhoods, aggregated edge set and solver diagnostics

    Raises:
        ValueError: For fewer than two observations or invalid inputs
    """
    if data.n < 2:
        raise ValueError("RWL needs at least two observations")
    lam = validate_lambda(lam)
    aggregation = validate_aggregation(aggregation)
    weights = _check_row_weights(row_weights, data.n, data.p)
    values = data.as_float()

    solutions = []
    for r in range(data.p):
        start = None
        if warm_start is not None:
            start = np.delete(warm_start[r], r)
        problem = node_problem(values, r, lam, _weights_for_node(weights, r, data.n))
        solutions.append(fit_l1_logistic(problem, tolerance, max_iter, warm_start=start))
    return _assemble(data.p, lam, aggregation, solutions)


def rwl_path(data: SpinMatrix, grid: Sequence[float], aggregation: str = 'and', row_weights=None,
             tolerance: Optional[float] = None, max_iter: Optional[int] = None) -> List[RwlFit]:
    """
    RWL fits along a descending penalty grid, each warm-started from the previous.

    Args:
        data: n x p observations
        grid: Penalties sorted in descending order

    Returns:
        List[RwlFit]: One fit per grid value
    """
    fits = []
    previous = None
    for lam in validate_lambda_grid(grid):
        fit = rwl_fit(data, lam, aggregation, row_weights, tolerance, max_iter, warm_start=previous)
        fits.append(fit)
        previous = fit.coefficient_matrix()
    return fits


def _candidate_gammas(law: MisclassLaw, candidates: Sequence[int]) -> None:
    missing = [s for s in candidates if s >= law.p]
    if missing:
        raise MissingGammaError(f"No misclassification probability for candidates {missing}")


def prior_state_weights(law: MisclassLaw, observed_row, candidates: Iterable[int],
                        row: Optional[int] = None) -> np.ndarray:
    """
    Misclassification-only weights of every candidate configuration.

    The weight of z is the product over candidates of gamma_s when z_s
    differs from the observed spin and 1 - gamma_s when it agrees.

    Args:
        law: Misclassification law
        observed_row: Observed spin vector of length p
        candidates: Non-empty candidate set
        row: Observation index, required for per-cell laws

    Returns:
        np.ndarray: Weights over config_table(|C|) rows, summing to 1

    Raises:
        MissingGammaError: If a candidate has no probability in the law
    """
    observed = validate_spins(observed_row).reshape(-1)
    candidates = sorted(set(candidates))
    if not candidates:
        raise ValueError("Candidate set cannot be empty")
    _candidate_gammas(law, candidates)
    validate_nodes(candidates, observed.size)
    gammas = law.row_gammas(row)[candidates]
    configs = config_table(len(candidates))
    log_weights = channel_log_factors(observed[None, candidates], gammas[None, :], configs)[0]
    return np.exp(log_weights)


def prior_weight_table(law: MisclassLaw, data: SpinMatrix, candidates: Iterable[int]) -> Tuple[np.ndarray, np.ndarray]:
    """
    Prior weights for every observation.

    Returns:
        Tuple[np.ndarray, np.ndarray]: (configurations K x c, weights n x K)
    """
    candidates = sorted(set(candidates))
    _candidate_gammas(law, candidates)
    law.check_shape(data.n, data.p)
    configs = config_table(len(candidates))
    gammas = law.cell_gammas(data.n)[:, candidates]
    log_weights = channel_log_factors(data.values[:, candidates], gammas, configs)
    return configs, np.exp(log_weights)


def rwl_weighted_fit(data: SpinMatrix, lam: float, law: MisclassLaw, candidates: Iterable[int],
                     aggregation: str = 'and', tolerance: Optional[float] = None,
                     max_iter: Optional[int] = None, warm_start: Optional[np.ndarray] = None) -> RwlFit:
    """
    RWL Weighted: every observation is expanded into one row per candidate
    configuration, weighted by its prior weight, then RWL is fit on the
    expanded rows.

    Args:
        data: n x p observations
        lam: Penalty
        law: Misclassification law
        candidates: Candidate nodes

    Returns:
        RwlFit: Fit on the expanded, weighted observations
    """
    candidates = sorted(set(candidates))
    if not candidates:
        return rwl_fit(data, lam, aggregation, None, tolerance, max_iter, warm_start)
    configs, weights = prior_weight_table(law, data, candidates)
    expanded = substitute_configurations(data.values, candidates, configs)
    flat = weights.reshape(-1)
    keep = flat > 0
    return rwl_fit(SpinMatrix(expanded[keep], data.names), lam, aggregation, flat[keep],
                   tolerance, max_iter, warm_start)


def rwl_weighted_path(data: SpinMatrix, grid: Sequence[float], law: MisclassLaw, candidates: Iterable[int],
                      aggregation: str = 'and', tolerance: Optional[float] = None,
                      max_iter: Optional[int] = None) -> List[RwlFit]:
    """RWL Weighted fits along a descending penalty grid with warm starts."""
    fits = []
    previous = None
    for lam in validate_lambda_grid(grid):
        fit = rwl_weighted_fit(data, lam, law, candidates, aggregation, tolerance, max_iter, warm_start=previous)
        fits.append(fit)
        previous = fit.coefficient_matrix()
    return fits
