#!/usr/bin/python3
"""
Ising and misclassified Ising distributions.

Exact quantities enumerate all 2^p states and are limited to
p <= EXACT_LIMIT. States follow the configuration layout of
engine.configurations (node 0 on the least-significant bit, spin -1 on 0).

Functions:
    state_table: All 2^p spin states
    ising_log_table: Log-probabilities of every state under Ising(G, theta)
    mising_log_table: Log-probabilities of every state under MIsing
    ising_logpmf: Log-probability of one state
    mising_logpmf: Log-probability of one observed state
    sample_ising: Exact or Gibbs sampling
    apply_misclassification: Independent per-cell flips
"""
import logging
from typing import Optional

import numpy as np
from scipy.special import expit, logsumexp

from config.settings import EXACT_LIMIT, GIBBS_BURN_IN, GIBBS_THIN
from engine import EnumerationLimitError
from engine.configurations import config_index, config_table
from models.graph import GraphSpec
from models.spins import MisclassLaw, MisclassMode, SpinMatrix
from validators.validators import validate_positive_int, validate_seed, validate_spins

logger = logging.getLogger(__name__)

GIBBS_CHAINS = 256


def _check_limit(p: int, exact_limit: Optional[int]) -> None:
    limit = EXACT_LIMIT if exact_limit is None else exact_limit
    if p > limit:
        raise EnumerationLimitError(f"p={p} exceeds the exact enumeration limit of {limit}")


def _spin_vector(x, p: int) -> np.ndarray:
    spins = validate_spins(x)
    if spins.shape != (p,):
        raise ValueError(f"Spin vector has shape {spins.shape}, expected ({p},)")
    return spins


def state_table(p: int, exact_limit: Optional[int] = None) -> np.ndarray:
    """2^p x p table of every spin state."""
    _check_limit(p, exact_limit)
    return config_table(p)


def ising_log_table(graph: GraphSpec, exact_limit: Optional[int] = None) -> np.ndarray:
    """
    Log-probabilities of all states under Ising(G, theta).

    Args:
        graph: Graph with edge weights theta_st
        exact_limit: Override of the enumeration limit

    Returns:
        np.ndarray: Length 2^p vector of log P(x)
    """
    states = state_table(graph.p, exact_limit)
    energy = np.zeros(states.shape[0])
    for s, t, weight in graph.edges:
        energy += weight * (states[:, s] * states[:, t])
    return energy - logsumexp(energy)


def channel_transform(table: np.ndarray, gammas: np.ndarray) -> np.ndarray:
    """
    Push a 2^p probability table through independent per-node flips.

    Args:
        table: Length 2^p probabilities
        gammas: Length p flip probabilities

    Returns:
        np.ndarray: Length 2^p probabilities of the observed states
    """
    p = gammas.shape[0]
    # C-order reshape puts node p-1 on axis 0
    tensor = table.reshape((2,) * p) if p else table
    for s, gamma in enumerate(gammas):
        if gamma == 0:
            continue
        axis = p - 1 - s
        tensor = (1.0 - gamma) * tensor + gamma * np.flip(tensor, axis=axis)
    return tensor.reshape(-1)


def mising_log_table(graph: GraphSpec, law: MisclassLaw, exact_limit: Optional[int] = None) -> np.ndarray:
    """
    Log-probabilities of all observed states under MIsing_gamma(G, theta).

    Per-cell laws are reduced to their per-node marginals.

    Args:
        graph: Graph with edge weights
        law: Misclassification law
        exact_limit: Override of the enumeration limit

    Returns:
        np.ndarray: Length 2^p vector of log P(X~ = x~)
    """
    if law.p != graph.p:
        raise ValueError(f"Law covers {law.p} nodes, graph has {graph.p}")
    if law.mode is MisclassMode.PER_CELL:
        logger.warning("Per-cell law reduced to per-node marginal flip probabilities")
    probabilities = np.exp(ising_log_table(graph, exact_limit))
    observed = channel_transform(probabilities, law.node_gammas())
    with np.errstate(divide='ignore'):
        return np.log(observed)


def ising_logpmf(graph: GraphSpec, x, exact_limit: Optional[int] = None) -> float:
    """
    Exact log-probability of a spin vector under Ising(G, theta).

    Args:
        graph: Graph with edge weights
        x: Spin vector of length p
        exact_limit: Override of the enumeration limit

    Returns:
        float: log P(x)

    Raises:
        EnumerationLimitError: If p exceeds the enumeration limit
        ValueError: If x is not a valid spin vector
    """
    spins = _spin_vector(x, graph.p)
    return float(ising_log_table(graph, exact_limit)[config_index(spins)])


def mising_logpmf(graph: GraphSpec, law: MisclassLaw, x_tilde, exact_limit: Optional[int] = None) -> float:
    """
    Exact log-probability of an observed spin vector under MIsing_gamma(G, theta).

    Args:
        graph: Graph with edge weights
        law: Per-node misclassification law
        x_tilde: Observed spin vector
        exact_limit: Override of the enumeration limit

    Returns:
        float: log P(X~ = x~)
    """
    spins = _spin_vector(x_tilde, graph.p)
    return float(mising_log_table(graph, law, exact_limit)[config_index(spins)])


def _sample_exact(graph: GraphSpec, n: int, rng: np.random.Generator,
                  exact_limit: Optional[int]) -> np.ndarray:
    probabilities = np.exp(ising_log_table(graph, exact_limit))
    cdf = np.cumsum(probabilities)
    draws = np.searchsorted(cdf, rng.random(n) * cdf[-1], side='right')
    draws = np.minimum(draws, cdf.size - 1)
    return config_table(graph.p)[draws]


def _sample_gibbs(graph: GraphSpec, n: int, rng: np.random.Generator, burn_in: int, thin: int) -> np.ndarray:
    """
    Single-site Gibbs sampling over a block of independent chains.

    Each chain runs burn_in sweeps, then records a state every thin sweeps.
    Node r is redrawn from P(x_r = 1 | rest) = expit(2 * sum_t theta_rt x_t).
    """
    theta = graph.weight_matrix()
    chains = min(n, GIBBS_CHAINS)
    per_chain = -(-n // chains)
    state = np.where(rng.random((chains, graph.p)) < 0.5, -1.0, 1.0)
    samples = np.empty((per_chain, chains, graph.p), dtype=np.int8)

    def sweep():
        for r in range(graph.p):
            field = state @ theta[r]
            state[:, r] = np.where(rng.random(chains) < expit(2.0 * field), 1.0, -1.0)

    for _ in range(burn_in):
        sweep()
    for draw in range(per_chain):
        for _ in range(thin):
            sweep()
        samples[draw] = state
    # chain-major order keeps rows of one chain contiguous
    return samples.transpose(1, 0, 2).reshape(-1, graph.p)[:n]


def sample_ising(graph: GraphSpec, n: int, method: str = 'exact', seed: int = 0,
                 burn_in: Optional[int] = None, thin: Optional[int] = None,
                 exact_limit: Optional[int] = None) -> SpinMatrix:
    """
    Draw n observations from Ising(G, theta).

    Args:
        graph: Graph with edge weights
        n: Observation count
        method: 'exact' (inverse CDF over the state table) or 'gibbs'
        seed: Random seed
        burn_in: Gibbs burn-in sweeps (default from settings)
        thin: Gibbs sweeps between recorded draws (default from settings)
        exact_limit: Override of the enumeration limit

    Returns:
        SpinMatrix: n x p observations, reproducible given the seed

    Raises:
        ValueError: For an unknown method or invalid Gibbs settings
        EnumerationLimitError: For exact sampling above the limit
    """
    n = validate_positive_int(n, "Sample size")
    rng = np.random.default_rng(validate_seed(seed))
    if method == 'exact':
        values = _sample_exact(graph, n, rng, exact_limit)
    elif method == 'gibbs':
        burn_in = validate_positive_int(GIBBS_BURN_IN if burn_in is None else burn_in, "Burn-in", minimum=0)
        thin = validate_positive_int(GIBBS_THIN if thin is None else thin, "Thinning")
        values = _sample_gibbs(graph, n, rng, burn_in, thin)
    else:
        raise ValueError(f"Unknown sampling method: {method!r}")
    names = graph.labels if graph.labels else None
    return SpinMatrix(values, names)


def apply_misclassification(data: SpinMatrix, law: MisclassLaw, seed: int = 0) -> SpinMatrix:
    """
    Flip each entry independently with its misclassification probability.

    Args:
        data: Clean observations
        law: Per-node or per-cell law matching the data shape
        seed: Random seed

    Returns:
        SpinMatrix: Misclassified observations

    Raises:
        ValueError: If the law does not match the data shape
    """
    law.check_shape(data.n, data.p)
    rng = np.random.default_rng(validate_seed(seed))
    flips = rng.random((data.n, data.p)) < law.cell_gammas(data.n)
    return SpinMatrix(np.where(flips, -data.values, data.values), data.names)
