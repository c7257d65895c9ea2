#!/usr/bin/python3
"""
This module provides validation functions for engine inputs.

These functions validate spin data, misclassification probabilities,
tuning parameters and node references, and return the value in a
normalized form.
"""
import math
from typing import Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np


def validate_spins(values) -> np.ndarray:
    """
    Validate an array of spins.

    Args:
        values: Array-like of entries expected in {-1, +1}

    Returns:
        np.ndarray: Spins as an int8 array

    Raises:
        ValueError: If any entry is not exactly -1 or +1
    """
    array = np.asarray(values)
    if array.size == 0:
        raise ValueError("Spin data cannot be empty")
    if not np.all((array == 1) | (array == -1)):
        raise ValueError("Spin entries must be exactly -1 or +1")
    return array.astype(np.int8)


def validate_gammas(gammas) -> np.ndarray:
    """
    Validate misclassification probabilities.

    Args:
        gammas: Array-like of flip probabilities

    Returns:
        np.ndarray: Probabilities as a float array

    Raises:
        ValueError: If any probability is outside [0, 1] or not finite
    """
    array = np.array(gammas, dtype=float)
    if array.size == 0:
        raise ValueError("Misclassification probabilities cannot be empty")
    if not np.all(np.isfinite(array)):
        raise ValueError("Misclassification probabilities must be finite")
    if np.any(array < 0) or np.any(array > 1):
        raise ValueError("Misclassification probabilities must lie in [0, 1]")
    return array


def validate_lambda(lam: float) -> float:
    """
    Validate a regularization parameter.

    Args:
        lam: Penalty weight

    Returns:
        float: Validated penalty weight

    Raises:
        ValueError: If lambda is negative or not finite
    """
    try:
        value = float(lam)
    except (TypeError, ValueError):
        raise ValueError(f"Lambda must be a number, got {lam!r}")
    if not math.isfinite(value) or value < 0:
        raise ValueError("Lambda must be a finite non-negative number")
    return value


def validate_lambda_grid(grid: Iterable[float], descending: bool = True) -> List[float]:
    """
    Validate a grid of regularization parameters.

    Args:
        grid: Sequence of penalty weights
        descending: Require the grid to be sorted in descending order

    Returns:
        List[float]: Validated grid

    Raises:
        ValueError: If the grid is empty, has invalid entries or is unsorted
    """
    values = [validate_lambda(lam) for lam in grid]
    if not values:
        raise ValueError("Lambda grid cannot be empty")
    if descending and any(a < b for a, b in zip(values, values[1:])):
        raise ValueError("Lambda grid must be sorted in descending order")
    return values


def parse_lambda_grid(text: str) -> List[float]:
    """
    Parse a comma-separated lambda grid and sort it descending.

    Args:
        text: Grid such as "0.3,0.2,0.1"

    Returns:
        List[float]: Validated descending grid
    """
    try:
        values = [float(item) for item in text.split(',') if item.strip()]
    except ValueError:
        raise ValueError(f"Invalid lambda grid: {text!r}")
    return validate_lambda_grid(sorted(values, reverse=True))


def validate_node(node: int, p: int) -> int:
    """
    Validate a node index against a node count.

    Args:
        node: 0-based node index
        p: Node count of the owning graph

    Returns:
        int: Validated node index

    Raises:
        ValueError: If the index is out of range
    """
    if isinstance(node, bool) or not isinstance(node, (int, np.integer)):
        raise ValueError(f"Node index must be an integer, got {node!r}")
    if not 0 <= int(node) < p:
        raise ValueError(f"Node index {node} out of range for p={p}")
    return int(node)


def validate_nodes(nodes: Iterable[int], p: int) -> frozenset:
    """Validate a collection of node indices and return it as a frozenset."""
    return frozenset(validate_node(node, p) for node in nodes)


def validate_seed(seed) -> int:
    """
    Validate a random seed.

    Args:
        seed: Seed value

    Returns:
        int: Seed as an unsigned 64-bit integer

    Raises:
        ValueError: If the seed is negative or too large
    """
    try:
        value = int(seed)
    except (TypeError, ValueError):
        raise ValueError(f"Seed must be an integer, got {seed!r}")
    if not 0 <= value < 2 ** 64:
        raise ValueError("Seed must be an unsigned 64-bit integer")
    return value


def parse_candidates(text: str, p: int) -> Union[frozenset, Tuple[str, float]]:
    """
    Parse a candidate specification.

    Accepts either an explicit comma-separated node list ("0,3,7"), an
    empty string for no candidates, or a threshold rule "auto:q".

    Args:
        text: Candidate specification
        p: Node count

    Returns:
        frozenset of node indices, or ('auto', q) for a threshold rule

    Raises:
        ValueError: If the specification is malformed
    """
    text = (text or '').strip()
    if text.startswith('auto:'):
        try:
            threshold = float(text[len('auto:'):])
        except ValueError:
            raise ValueError(f"Invalid candidate threshold: {text!r}")
        if not 0 <= threshold <= 1:
            raise ValueError("Candidate threshold must lie in [0, 1]")
        return ('auto', threshold)
    if not text:
        return frozenset()
    try:
        nodes = [int(item) for item in text.split(',') if item.strip()]
    except ValueError:
        raise ValueError(f"Invalid candidate list: {text!r}")
    return validate_nodes(nodes, p)


def validate_aggregation(rule: Optional[str]) -> str:
    """Validate an edge aggregation rule ('and' or 'or')."""
    value = (rule or 'and').lower()
    if value not in ('and', 'or'):
        raise ValueError("Aggregation must be 'and' or 'or'")
    return value


def validate_positive_int(value, name: str, minimum: int = 1) -> int:
    """Validate an integer parameter with a lower bound."""
    try:
        number = int(value)
    except (TypeError, ValueError):
        raise ValueError(f"{name} must be an integer, got {value!r}")
    if number < minimum:
        raise ValueError(f"{name} must be at least {minimum}")
    return number


def validate_shape(shape: Sequence[int], expected: Sequence[int], name: str) -> None:
    """Raise ValueError when an array shape differs from the expected one."""
    if tuple(shape) != tuple(expected):
        raise ValueError(f"{name} has shape {tuple(shape)}, expected {tuple(expected)}")
