#!/usr/bin/python3
"""
Exact misclassified score and information, and the assumption checks
of the neighborhood-selection consistency result under misclassification.

All expectations enumerate the 2^p observed states under MIsing and are
limited to p <= EXACT_LIMIT.

Functions:
    misclassified_score: E(W_r) at the true coefficients
    misclassified_information: -E(grad W_r) at the true coefficients
    node_diagnostics: Score, information and condition values of one node
    check_assumptions: Full report with the regularization bound
"""
import logging
import math
from typing import Optional, Tuple

import numpy as np
from scipy.special import expit

from engine.distributions import mising_log_table, state_table
from models.diagnostics import DiagnosticsReport, NodeDiagnostics
from models.graph import GraphSpec, neighbors
from models.spins import MisclassLaw
from validators.validators import validate_node, validate_positive_int

logger = logging.getLogger(__name__)

# Q_SS eigenvalues at or below this count as singular
SINGULAR_TOLERANCE = 1e-12


def _observed_distribution(graph: GraphSpec, law: MisclassLaw,
                           exact_limit: Optional[int]) -> Tuple[np.ndarray, np.ndarray]:
    states = state_table(graph.p, exact_limit)
    probabilities = np.exp(mising_log_table(graph, law, exact_limit))
    return states, probabilities


def _node_terms(graph: GraphSpec, states: np.ndarray, r: int):
    """Predictors 2 x~_{\\r}, fitted probabilities and responses of node r."""
    theta = graph.weight_matrix()
    others = [s for s in range(graph.p) if s != r]
    predictors = 2.0 * states[:, others].astype(float)
    fitted = expit(predictors @ theta[r, others])
    response = (states[:, r] == 1).astype(float)
    return others, predictors, fitted, response


def misclassified_score(graph: GraphSpec, law: MisclassLaw, r: int,
                        exact_limit: Optional[int] = None) -> np.ndarray:
    """
    Expected logistic score of node r at the true coefficients under MIsing.

    The score of one observation is (sigma(eta) - 1(x~_r = 1)) * 2 x~_{\\r}.
    It is centered when no node is misclassified.

    Args:
        graph: True graph with weights
        law: Misclassification law (per-cell laws use node means)
        r: Node
        exact_limit: Override of the enumeration limit

    Returns:
        np.ndarray: Length p - 1 vector ordered by the other nodes
    """
    r = validate_node(r, graph.p)
    states, probabilities = _observed_distribution(graph, law, exact_limit)
    _, predictors, fitted, response = _node_terms(graph, states, r)
    return predictors.T @ (probabilities * (fitted - response))


def misclassified_information(graph: GraphSpec, law: MisclassLaw, r: int,
                              exact_limit: Optional[int] = None) -> np.ndarray:
    """
    Misclassified information of node r: E[sigma (1 - sigma) 4 x~ x~'].

    Returns:
        np.ndarray: Symmetric (p-1) x (p-1) matrix
    """
    r = validate_node(r, graph.p)
    states, probabilities = _observed_distribution(graph, law, exact_limit)
    _, predictors, fitted, _ = _node_terms(graph, states, r)
    variance = probabilities * fitted * (1.0 - fitted)
    return predictors.T @ (variance[:, None] * predictors)


def _support_conditions(information: np.ndarray, support: list) -> Tuple[float, float]:
    """Smallest eigenvalue of Q_SS and the incoherence norm of Q_{S^c S} Q_SS^{-1}."""
    if not support:
        return math.inf, 0.0
    outside = [j for j in range(information.shape[0]) if j not in support]
    q_ss = information[np.ix_(support, support)]
    c_min = float(np.linalg.eigvalsh(q_ss)[0])
    if c_min <= SINGULAR_TOLERANCE:
        return c_min, math.inf
    if not outside:
        return c_min, 0.0
    # rows of Q_{S^c S} Q_SS^{-1}, using symmetry of Q_SS
    product = np.linalg.solve(q_ss, information[np.ix_(support, outside)]).T
    return c_min, float(np.linalg.norm(product, ord=np.inf))


def node_diagnostics(graph: GraphSpec, r: int, states: np.ndarray,
                     probabilities: np.ndarray) -> NodeDiagnostics:
    """Diagnostics of node r given the enumerated observed distribution."""
    others, predictors, fitted, response = _node_terms(graph, states, r)
    score = predictors.T @ (probabilities * (fitted - response))
    variance = probabilities * fitted * (1.0 - fitted)
    information = predictors.T @ (variance[:, None] * predictors)
    # E[x~ x~'] = E[(2 x~)(2 x~)'] / 4
    second_moment = 0.25 * (predictors.T @ (probabilities[:, None] * predictors))

    true_neighbors = sorted(neighbors(graph, [r]) - {r})
    support = [others.index(t) for t in true_neighbors]
    c_min, incoherence = _support_conditions(information, support)
    d_max = float(np.linalg.eigvalsh(second_moment)[-1]) if others else 0.0
    return NodeDiagnostics(r, tuple(true_neighbors), score, information, c_min, incoherence, d_max)


def check_assumptions(graph: GraphSpec, law: MisclassLaw, n: int, d: Optional[int] = None,
                      exact_limit: Optional[int] = None) -> DiagnosticsReport:
    """
    Evaluate the dependency, incoherence and misclassification conditions.

    Args:
        graph: True graph with weights
        law: Misclassification law
        n: Sample size for the regularization bound
        d: Maximum degree (default: the graph's)
        exact_limit: Override of the enumeration limit

    Returns:
        DiagnosticsReport: Node-wise values and global checks; a singular
            Q_SS or alpha <= 0 is reported as a failed condition
    """
    n = validate_positive_int(n, "Sample size")
    d = graph.max_degree() if d is None else validate_positive_int(d, "Maximum degree", minimum=0)
    states, probabilities = _observed_distribution(graph, law, exact_limit)
    per_node = tuple(node_diagnostics(graph, r, states, probabilities) for r in range(graph.p))

    s_max = max((node.score_norm for node in per_node), default=0.0)
    c_min = min((node.c_min for node in per_node), default=math.inf)
    d_max = max((node.d_max for node in per_node), default=0.0)
    alpha = 1.0 - max((node.incoherence for node in per_node), default=0.0)

    dependency_ok = c_min > SINGULAR_TOLERANCE
    incoherence_ok = 0.0 < alpha <= 1.0
    if not (dependency_ok and incoherence_ok):
        a3_bound = math.nan
    elif d == 0 or math.isinf(c_min):
        a3_bound = math.inf
    else:
        a3_bound = c_min ** 2 * alpha ** 2 / (400.0 * d_max * d * (2.0 - alpha) ** 2)
    a3_satisfied = dependency_ok and incoherence_ok and s_max <= a3_bound

    if incoherence_ok and graph.p > 1:
        lambda_bound = (16.0 * (2.0 - alpha) / alpha) * (math.sqrt(math.log(graph.p) / n) + s_max / 4.0)
    else:
        lambda_bound = math.inf

    logger.info(f"Diagnostics: S_max={s_max:.4g}, C_min={c_min:.4g}, D_max={d_max:.4g}, "
                f"alpha={alpha:.4g}, misclassification condition "
                f"{'holds' if a3_satisfied else 'fails'}")
    return DiagnosticsReport(
        per_node=per_node,
        n=n,
        d=d,
        s_max=float(s_max),
        c_min=float(c_min),
        d_max=float(d_max),
        alpha=float(alpha),
        dependency_ok=dependency_ok,
        incoherence_ok=incoherence_ok,
        a3_bound=float(a3_bound),
        a3_satisfied=bool(a3_satisfied),
        lambda_lower_bound=float(lambda_bound),
    )
