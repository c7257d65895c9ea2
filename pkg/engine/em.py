#!/usr/bin/python3
"""
EM refinement of an RWL edge set under known misclassification.

Candidate nodes C are treated as latent. The update set U = N(N(C)) of
the initial edge set is split into connected components, and each
component with candidates is refit independently:

    E-step: for every observation, the posterior weight of each candidate
            configuration z is proportional to exp(A(z, x~_P)) * c(z, x~_C),
            where A is the Ising association inside the component and c the
            misclassification factor.
    M-step: every node of the component is refit by a weighted penalized
            logistic regression on the observations expanded over z, with
            coefficients towards nodes outside the component held fixed as
            offsets.

All nodes of one update use the same weight table.

Functions:
    estep_weights: Posterior weights for one component
    build_mstep_problem: Expanded weighted regression for one node
    em_mstep: Updated coefficients of one node
    em_update: Run the refinement and aggregate the new edge set
    penalized_node_likelihood: Likelihood audit for one node
"""
import logging
from typing import Dict, Iterable, Optional, Tuple

import numpy as np
from scipy.special import logsumexp

from config.settings import C_MAX
from engine import CandidateLimitError, MissingGammaError
from engine.configurations import channel_log_factors, config_table, substitute_configurations
from engine.logreg import fit_l1_logistic
from models.em_state import EMState, WeightTable
from models.estimates import LogRegProblem, RwlFit
from models.graph import EdgeSetEstimate, update_partition
from models.spins import MisclassLaw, SpinMatrix
from validators.validators import validate_lambda, validate_nodes, validate_positive_int

logger = logging.getLogger(__name__)


def _split(state: EMState, component: Iterable[int]) -> Tuple[list, list, list]:
    members = sorted(component)
    candidates = [s for s in members if s in state.partition.candidates]
    participants = [s for s in members if s not in state.partition.candidates]
    return members, candidates, participants


def _candidate_log_factors(law: MisclassLaw, data: SpinMatrix, candidates, configs) -> np.ndarray:
    missing = [s for s in candidates if s >= law.p]
    if missing:
        raise MissingGammaError(f"No misclassification probability for candidates {missing}")
    law.check_shape(data.n, data.p)
    gammas = law.cell_gammas(data.n)[:, candidates]
    return channel_log_factors(data.values[:, candidates], gammas, configs)


def estep_weights(state: EMState, data: SpinMatrix, law: MisclassLaw, component: Iterable[int],
                  c_max: Optional[int] = None) -> WeightTable:
    """
    Posterior weights of candidate configurations for one component.

    Participants are conditioned on as observed. Per-cell probabilities
    are used when the law provides them.

    Args:
        state: Current EM state
        data: Observed spins
        law: Misclassification law
        component: Nodes of one update-set component
        c_max: Candidate limit (default from settings)

    Returns:
        WeightTable: n x 2^c weights, rows summing to 1

    Raises:
        CandidateLimitError: If the component has more than c_max candidates
        MissingGammaError: If a candidate has no probability in the law
    """
    limit = C_MAX if c_max is None else c_max
    members, candidates, participants = _split(state, component)
    if len(candidates) > limit:
        raise CandidateLimitError(f"Component has {len(candidates)} candidates, limit is {limit}")

    configs = config_table(len(candidates))
    spins = configs.astype(float)
    sym = state.symmetric_theta()
    within = sym[np.ix_(candidates, candidates)]
    across = sym[np.ix_(candidates, participants)]

    # A(z, x_P) up to terms that do not depend on z
    association = 0.5 * np.einsum('kc,cd,kd->k', spins, within, spins)
    field = data.as_float()[:, participants] @ across.T
    logits = field @ spins.T + association[None, :]
    logits = logits + _candidate_log_factors(law, data, candidates, configs)

    weights = np.exp(logits - logsumexp(logits, axis=1, keepdims=True))
    return WeightTable(tuple(members), tuple(candidates), configs, weights)


def build_mstep_problem(state: EMState, data: SpinMatrix, weights: WeightTable, r: int) -> LogRegProblem:
    """
    Weighted regression maximized by the M-step for node r.

    One row per (observation, configuration) with positive weight: the
    component's candidates are replaced by the configuration, the row weight
    is the posterior weight over n, and nodes outside the component enter as
    the offset 2 * sum_s theta_rs x~_s with their fixed coefficients, which
    also contribute the constant penalty lam * sum_s |theta_rs|.

    Args:
        state: Current EM state
        data: Observed spins
        weights: E-step table of r's component
        r: Response node, a member of the component

    Returns:
        LogRegProblem: Problem whose coefficients follow the other members in order
    """
    members = list(weights.component)
    if r not in members:
        raise ValueError(f"Node {r} is not in the weighted component")
    position = {s: j for j, s in enumerate(members)}
    others = [s for s in members if s != r]
    outside = [s for s in range(data.p) if s not in position]

    values = data.as_float()
    expanded = substitute_configurations(values[:, members], [position[s] for s in weights.candidates],
                                         weights.configs)
    count = weights.configs.shape[0]
    fixed = state.fixed_theta[r, outside]
    offsets = np.repeat(2.0 * (values[:, outside] @ fixed), count)
    row_weights = weights.weights.reshape(-1) / data.n

    keep = row_weights > 0
    return LogRegProblem(
        design=expanded[keep][:, [position[s] for s in others]],
        response=expanded[keep, position[r]],
        lam=state.lam,
        sample_weights=row_weights[keep],
        offsets=offsets[keep],
        fixed_penalty=state.lam * float(np.abs(fixed).sum()),
    )


def em_mstep(state: EMState, data: SpinMatrix, weights: WeightTable, r: int,
             tolerance: Optional[float] = None, max_iter: Optional[int] = None) -> Dict[int, float]:
    """
    M-step for node r.

    Args:
        state: Current EM state
        data: Observed spins
        weights: E-step table of r's component
        r: Response node

    Returns:
        Dict[int, float]: Updated coefficients of r against the other component members
    """
    problem = build_mstep_problem(state, data, weights, r)
    others = [s for s in weights.component if s != r]
    solution = fit_l1_logistic(problem, tolerance, max_iter, warm_start=state.theta[r, others])
    if not solution.converged:
        logger.warning(f"M-step for node {r} did not converge (KKT residual {solution.kkt_residual:.3g})")
    logger.debug(f"M-step node {r}: objective {solution.objective:.8g}, {solution.iterations} sweeps")
    return {s: float(value) for s, value in zip(others, solution.coefficients)}


def penalized_node_likelihood(state: EMState, data: SpinMatrix, r: int,
                              law: Optional[MisclassLaw] = None) -> float:
    """
    Penalized node-conditional log-likelihood of the observed data.

    Without a law this is the mean of log P(x~_r | x~_rest) under node r's
    current coefficients minus lam * ||theta_r||_1, coefficients towards
    nodes outside r's component counted at their fixed values. With a law,
    the latent states of the candidates in r's component are marginalized
    under the misclassification factor.

    Args:
        state: EM state
        data: Observed spins
        r: Node in the update set
        law: Optional misclassification law

    Returns:
        float: Penalized log-likelihood per observation
    """
    component = state.partition.component_of(r)
    theta_r = state.theta[r].copy()
    theta_r[r] = 0.0
    penalty = state.lam * float(np.abs(theta_r).sum())
    values = data.as_float()

    candidates = sorted(component & state.partition.candidates)
    if law is None or not candidates:
        eta = 2.0 * (values @ theta_r)
        return float(np.mean(-np.logaddexp(0.0, -values[:, r] * eta))) - penalty

    configs = config_table(len(candidates))
    log_prior = _candidate_log_factors(law, data, candidates, configs)
    expanded = substitute_configurations(values, candidates, configs)
    eta = 2.0 * (expanded @ theta_r)
    log_conditional = -np.logaddexp(0.0, -expanded[:, r] * eta).reshape(data.n, -1)
    return float(np.mean(logsumexp(log_prior + log_conditional, axis=1))) - penalty


def _merge_edges(initial: EdgeSetEstimate, theta: np.ndarray, refit) -> EdgeSetEstimate:
    """AND rule inside refit components, initial edges everywhere else."""
    kept = set()
    for s, t in initial.edges:
        if not any(s in component and t in component for component in refit):
            kept.add((s, t))
    for component in refit:
        members = sorted(component)
        for i, s in enumerate(members):
            for t in members[i + 1:]:
                if theta[s, t] != 0 and theta[t, s] != 0:
                    kept.add((s, t))
    return EdgeSetEstimate(initial.p, frozenset(kept))


def em_update(initial: RwlFit, data: SpinMatrix, law: MisclassLaw, candidates: Iterable[int],
              lam: float, iterations: int = 1, c_max: Optional[int] = None,
              audit_likelihood: bool = False, tolerance: Optional[float] = None,
              max_iter: Optional[int] = None) -> Tuple[EMState, EdgeSetEstimate]:
    """
    Refine an RWL edge set with EM updates.

    Args:
        initial: Initial RWL (or RWL Weighted) fit
        data: Observed spins used for the initial fit
        law: Misclassification law (per-cell probabilities preferred)
        candidates: Candidate nodes
        lam: Penalty of the M-step regressions
        iterations: Number of EM updates
        c_max: Candidate limit per component
        audit_likelihood: Record the marginal penalized likelihood of every
            updated node before and after each update

    Returns:
        Tuple[EMState, EdgeSetEstimate]: Final state and edge set
    """
    iterations = validate_positive_int(iterations, "EM iterations")
    lam = validate_lambda(lam)
    if data.p != initial.p:
        raise ValueError(f"Data has {data.p} nodes, initial fit has {initial.p}")
    candidates = validate_nodes(candidates, data.p)

    coefficients = initial.coefficient_matrix()
    partition = update_partition(initial.edge_set, candidates)
    state = EMState(0, coefficients, coefficients, partition, lam)
    if not candidates:
        logger.info("No candidate nodes; EM update leaves the edge set unchanged")
        return state, initial.edge_set

    refit = [component for component in partition.components if component & candidates]
    logger.info(f"EM refit of {len(refit)} component(s), c_max={partition.c_max}, "
                f"|U|={len(partition.update_set)}")

    edges = initial.edge_set
    for k in range(iterations):
        theta = state.theta.copy()
        for component in refit:
            table = estep_weights(state, data, law, component, c_max)
            for r in table.component:
                for s, value in em_mstep(state, data, table, r, tolerance, max_iter).items():
                    theta[r, s] = value
        edges = _merge_edges(initial.edge_set, theta, refit)

        audit = None
        if audit_likelihood:
            updated = state.with_theta(theta, edges)
            audit = {}
            for component in refit:
                for r in sorted(component):
                    before = penalized_node_likelihood(state, data, r, law)
                    after = penalized_node_likelihood(updated, data, r, law)
                    audit[r] = (before, after)
                    if after < before - 1e-12:
                        logger.warning(f"EM update {k + 1}: penalized likelihood of node {r} "
                                       f"decreased from {before:.8g} to {after:.8g}")
        state = state.with_theta(theta, edges, audit)
        logger.info(f"EM update {k + 1}/{iterations}: {len(edges.edges)} edges")
    return state, edges
