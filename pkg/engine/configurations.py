#!/usr/bin/python3
"""
Enumeration of spin configurations and the misclassification channel factor.

Configurations of k nodes are indexed 0..2^k-1 with node j on bit j
(least-significant first) and spin -1 on bit value 0.
"""
import numpy as np


def config_table(k: int) -> np.ndarray:
    """
    All spin configurations of k nodes.

    Args:
        k: Number of nodes

    Returns:
        np.ndarray: 2^k x k int8 array, row index encodes the configuration
    """
    if k < 0:
        raise ValueError("Configuration size must be non-negative")
    codes = np.arange(2 ** k, dtype=np.int64)[:, None]
    bits = (codes >> np.arange(k, dtype=np.int64)) & 1
    return (2 * bits - 1).astype(np.int8)


def config_index(spins) -> int:
    """Row index of a spin vector in config_table(len(spins))."""
    bits = (np.asarray(spins) > 0).astype(np.int64)
    return int((bits << np.arange(bits.size, dtype=np.int64)).sum())


def channel_log_factors(observed: np.ndarray, gammas: np.ndarray, configs: np.ndarray) -> np.ndarray:
    """
    Log of the misclassification factor for every observation and configuration.

    The factor is the product over nodes of gamma when the configuration
    differs from the observed spin and 1 - gamma when it agrees.

    Args:
        observed: n x k observed spins
        gammas: n x k flip probabilities
        configs: K x k latent configurations

    Returns:
        np.ndarray: n x K array of log factors (-inf for impossible configurations)
    """
    agree = configs[None, :, :] == observed[:, None, :]
    factor = np.where(agree, 1.0 - gammas[:, None, :], gammas[:, None, :])
    with np.errstate(divide='ignore'):
        return np.log(factor).sum(axis=2)


def substitute_configurations(values: np.ndarray, columns, configs: np.ndarray) -> np.ndarray:
    """
    Expand each row into one copy per configuration of the given columns.

    Args:
        values: n x m matrix
        columns: Column positions replaced by each configuration
        configs: K x len(columns) configurations

    Returns:
        np.ndarray: (n * K) x m matrix; row i * K + k is row i with the
            columns replaced by configuration k
    """
    n, m = values.shape
    count = configs.shape[0]
    block = np.repeat(values[:, None, :], count, axis=1).astype(float)
    if len(columns):
        block[:, :, list(columns)] = configs[None, :, :]
    return block.reshape(n * count, m)
