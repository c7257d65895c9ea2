#!/usr/bin/python3
"""
Weighted l1-regularized logistic regression by coordinate descent.

The problem minimizes

    (1/W) sum_i w_i * log(1 + exp(-y_i * eta_i)) + lam * ||theta||_1

with eta_i = offset_i + 2 * x_i' theta (+ intercept) and W = sum_i w_i.
Each coordinate step first tries a soft-thresholded Newton step with the
local curvature; when that step would raise the objective it falls back
to minimizing the quadratic majorizer built from the curvature bound 1/4
of the logistic loss. Either way the objective never increases.

Functions:
    fit_l1_logistic: Solve one problem
    lambda_path: Solve along a descending grid of penalties
    lambda_max: Smallest penalty with an all-zero solution
    logistic_objective: Reported objective at any point
    smooth_gradient: Gradient of the smooth part
    kkt_residual: Largest optimality-condition violation
"""
import logging
from typing import List, Optional, Sequence

import numpy as np
from scipy.special import expit

from config.settings import SOLVER_MAX_ITER, SOLVER_TOLERANCE
from engine import DegenerateProblemError
from models.estimates import LogRegProblem, LogRegSolution
from validators.validators import validate_lambda_grid

logger = logging.getLogger(__name__)


def _normalized_weights(problem: LogRegProblem) -> np.ndarray:
    total = problem.sample_weights.sum()
    if total <= 0:
        raise DegenerateProblemError("All sample weights are zero")
    return problem.sample_weights / total


def _linear_predictor(problem: LogRegProblem, coefficients: np.ndarray, intercept: float) -> np.ndarray:
    return problem.offsets + 2.0 * (problem.design @ coefficients) + intercept


def logistic_objective(problem: LogRegProblem, coefficients, intercept: float = 0.0) -> float:
    """
    Objective value at the given coefficients.

    Args:
        problem: Regression problem
        coefficients: k coefficients on the theta scale
        intercept: Intercept value

    Returns:
        float: Weighted mean loss + lam * ||theta||_1 + fixed penalty
    """
    coefficients = np.asarray(coefficients, dtype=float)
    weights = _normalized_weights(problem)
    eta = _linear_predictor(problem, coefficients, intercept)
    loss = weights @ np.logaddexp(0.0, -problem.response * eta)
    return float(loss + problem.lam * np.abs(coefficients).sum() + problem.fixed_penalty)


def smooth_gradient(problem: LogRegProblem, coefficients, intercept: float = 0.0) -> np.ndarray:
    """Gradient of the weighted mean loss with respect to the coefficients."""
    coefficients = np.asarray(coefficients, dtype=float)
    weights = _normalized_weights(problem)
    residual = expit(_linear_predictor(problem, coefficients, intercept)) - (problem.response > 0)
    return 2.0 * (problem.design.T @ (weights * residual))


def lambda_max(problem: LogRegProblem) -> float:
    """Smallest penalty for which the zero vector is optimal."""
    if problem.k == 0:
        return 0.0
    return float(np.abs(smooth_gradient(problem, np.zeros(problem.k))).max())


def kkt_residual(gradient: np.ndarray, coefficients: np.ndarray, lam: float) -> float:
    """
    Largest KKT violation.

    Active coordinates contribute |g_j + lam * sign(theta_j)|, inactive ones
    max(|g_j| - lam, 0).
    """
    if gradient.size == 0:
        return 0.0
    active = coefficients != 0
    violation = np.where(active,
                         np.abs(gradient + lam * np.sign(coefficients)),
                         np.maximum(np.abs(gradient) - lam, 0.0))
    return float(violation.max())


def _soft_threshold(value: float, threshold: float) -> float:
    if value > threshold:
        return value - threshold
    if value < -threshold:
        return value + threshold
    return 0.0


def _newton_step(current: float, gradient: float, hessian: float, lam: float) -> Optional[float]:
    """Proximal step with the local curvature; None when the curvature vanishes."""
    if hessian <= 1e-12:
        return None
    return _soft_threshold(current - gradient / hessian, lam / hessian)


def _decreases(response: np.ndarray, weights: np.ndarray, eta: np.ndarray, column: np.ndarray,
               current: float, proposed: float, lam: float) -> bool:
    """Whether moving one coordinate from current to proposed does not raise the objective."""
    if proposed == current:
        return True
    before = weights @ np.logaddexp(0.0, -response * eta) + lam * abs(current)
    after = weights @ np.logaddexp(0.0, -response * (eta + (proposed - current) * column)) + lam * abs(proposed)
    return after <= before


def fit_l1_logistic(problem: LogRegProblem, tolerance: Optional[float] = None,
                    max_iter: Optional[int] = None, warm_start=None) -> LogRegSolution:
    """
    Solve a weighted l1-penalized logistic regression.

    Args:
        problem: Regression problem
        tolerance: KKT residual at which the fit is declared converged
        max_iter: Maximum coordinate sweeps
        warm_start: Initial coefficients (zeros when omitted)

    Returns:
        LogRegSolution: Coefficients and diagnostics; converged is False when
            max_iter sweeps were not enough

    Raises:
        DegenerateProblemError: If every sample weight is zero
    """
    tolerance = SOLVER_TOLERANCE if tolerance is None else float(tolerance)
    max_iter = SOLVER_MAX_ITER if max_iter is None else int(max_iter)
    weights = _normalized_weights(problem)
    lam = problem.lam
    design2 = 2.0 * problem.design
    target = (problem.response > 0).astype(float)

    theta = np.zeros(problem.k) if warm_start is None else np.array(warm_start, dtype=float)
    if theta.shape != (problem.k,):
        raise ValueError(f"Warm start has shape {theta.shape}, expected ({problem.k},)")
    intercept = 0.0
    eta = problem.offsets + design2 @ theta

    # Majorizing curvature per coordinate: sup of the logistic variance is 1/4
    curvature = 0.25 * (weights @ design2 ** 2)
    intercept_curvature = 0.25

    residual_kkt = np.inf
    iterations = 0
    for iterations in range(1, max_iter + 1):
        for j in range(problem.k):
            if curvature[j] <= 0:
                continue
            column = design2[:, j]
            fitted = expit(eta)
            gradient_j = weights @ ((fitted - target) * column)
            updated = _newton_step(theta[j], gradient_j, weights @ (fitted * (1.0 - fitted) * column ** 2), lam)
            if updated is None or not _decreases(problem.response, weights, eta, column, theta[j], updated, lam):
                updated = _soft_threshold(theta[j] - gradient_j / curvature[j], lam / curvature[j])
            delta = updated - theta[j]
            if delta != 0.0:
                eta += delta * design2[:, j]
                theta[j] = updated
        if problem.intercept:
            step = (weights @ (expit(eta) - target)) / intercept_curvature
            intercept -= step
            eta -= step

        residual = expit(eta) - target
        gradient = design2.T @ (weights * residual)
        residual_kkt = kkt_residual(gradient, theta, lam)
        if problem.intercept:
            residual_kkt = max(residual_kkt, abs(float(weights @ residual)))
        if residual_kkt <= tolerance:
            break

    converged = residual_kkt <= tolerance
    if not converged:
        logger.warning(f"Logistic fit did not converge in {max_iter} sweeps "
                       f"(lambda={lam:.6g}, KKT residual={residual_kkt:.3g})")
    return LogRegSolution(
        coefficients=theta,
        objective=logistic_objective(problem, theta, intercept),
        kkt_residual=float(residual_kkt),
        iterations=iterations,
        converged=converged,
        intercept=float(intercept),
    )


def lambda_path(problem: LogRegProblem, grid: Sequence[float], warm_starting: bool = True,
                tolerance: Optional[float] = None, max_iter: Optional[int] = None) -> List[LogRegSolution]:
    """
    Solve a problem template along a descending penalty grid.

    Args:
        problem: Template; its own lam is replaced by each grid value
        grid: Penalties sorted in descending order
        warm_starting: Start each fit from the previous solution

    Returns:
        List[LogRegSolution]: One solution per grid value
    """
    grid = validate_lambda_grid(grid)
    solutions = []
    previous = None
    for lam in grid:
        solution = fit_l1_logistic(problem.with_lambda(lam), tolerance, max_iter,
                                   warm_start=previous if warm_starting else None)
        solutions.append(solution)
        previous = solution.coefficients
    return solutions
