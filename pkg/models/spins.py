#!/usr/bin/python3
"""
This module defines observation and misclassification containers.

Classes:
    SpinMatrix: n x p matrix of {-1, +1} observations
    MisclassMode: Enum of misclassification law layouts
    MisclassLaw: Per-node or per-cell flip probabilities
"""
import enum
from dataclasses import dataclass
from typing import FrozenSet, Iterable, Optional, Tuple

import numpy as np

from validators.validators import (
    validate_gammas,
    validate_nodes,
    validate_seed,
    validate_shape,
    validate_spins
)


@dataclass(frozen=True, eq=False)
class SpinMatrix:
    """
    Observations of a binary Markov random field.

    Attributes:
        values (np.ndarray): n x p int8 array with entries in {-1, +1}
        names (tuple): Node names used as CSV header
    """
    values: np.ndarray
    names: Optional[Tuple[str, ...]] = None

    def __post_init__(self):
        values = validate_spins(self.values)
        if values.ndim != 2:
            raise ValueError("Spin matrix must be two-dimensional")
        values.setflags(write=False)
        object.__setattr__(self, 'values', values)
        names = self.names if self.names is not None else tuple(f"X{j}" for j in range(values.shape[1]))
        if len(names) != values.shape[1]:
            raise ValueError("Name count must equal the number of columns")
        object.__setattr__(self, 'names', tuple(str(name) for name in names))

    @property
    def n(self) -> int:
        return self.values.shape[0]

    @property
    def p(self) -> int:
        return self.values.shape[1]

    def as_float(self) -> np.ndarray:
        return self.values.astype(float)


class MisclassMode(enum.Enum):
    """
    Layout of misclassification probabilities.

    Attributes:
        PER_NODE: One probability per node, shared by every observation
        PER_CELL: One probability per observation and node
    """
    PER_NODE = "perNode"
    PER_CELL = "perCell"


@dataclass(frozen=True, eq=False)
class MisclassLaw:
    """
    Independent misclassification channel.

    Attributes:
        mode (MisclassMode): perNode or perCell
        gammas (np.ndarray): length-p vector or n x p matrix of flip probabilities
    """
    mode: MisclassMode
    gammas: np.ndarray

    def __post_init__(self):
        mode = MisclassMode(self.mode)
        gammas = validate_gammas(self.gammas)
        expected_ndim = 1 if mode is MisclassMode.PER_NODE else 2
        if gammas.ndim != expected_ndim:
            raise ValueError(f"{mode.value} law expects a {expected_ndim}-dimensional gamma array")
        gammas.setflags(write=False)
        object.__setattr__(self, 'mode', mode)
        object.__setattr__(self, 'gammas', gammas)

    @classmethod
    def per_node(cls, gammas) -> 'MisclassLaw':
        return cls(MisclassMode.PER_NODE, np.asarray(gammas, dtype=float))

    @classmethod
    def per_cell(cls, gammas) -> 'MisclassLaw':
        return cls(MisclassMode.PER_CELL, np.asarray(gammas, dtype=float))

    @classmethod
    def half_observations(cls, n: int, p: int, nodes: Iterable[int], within_prob: float,
                          seed: int) -> 'MisclassLaw':
        """
        Misclassify the given nodes in a seeded random half of the observations.

        Args:
            n: Observation count
            p: Node count
            nodes: Nodes that can be misclassified
            within_prob: Flip probability inside the selected observations
            seed: Seed choosing the observations

        Returns:
            MisclassLaw: perCell law, within_prob on selected cells and 0 elsewhere
        """
        nodes = sorted(validate_nodes(nodes, p))
        rng = np.random.default_rng(validate_seed(seed))
        rows = rng.choice(n, size=n // 2, replace=False)
        gammas = np.zeros((n, p))
        gammas[np.ix_(np.sort(rows), nodes)] = validate_gammas([within_prob])[0]
        return cls.per_cell(gammas)

    @property
    def p(self) -> int:
        return self.gammas.shape[-1]

    def check_shape(self, n: int, p: int) -> None:
        """Raise ValueError when the law does not fit an n x p data set."""
        if self.mode is MisclassMode.PER_NODE:
            validate_shape(self.gammas.shape, (p,), "Misclassification law")
        else:
            validate_shape(self.gammas.shape, (n, p), "Misclassification law")

    def cell_gammas(self, n: int) -> np.ndarray:
        """n x p matrix of flip probabilities."""
        if self.mode is MisclassMode.PER_NODE:
            return np.broadcast_to(self.gammas, (n, self.p))
        if self.gammas.shape[0] != n:
            raise ValueError(f"Per-cell law has {self.gammas.shape[0]} rows, data has {n}")
        return self.gammas

    def row_gammas(self, row: Optional[int] = None) -> np.ndarray:
        """Flip probabilities of one observation (per-node laws ignore the row)."""
        if self.mode is MisclassMode.PER_NODE:
            return self.gammas
        if row is None:
            raise ValueError("Per-cell law needs an observation index")
        return self.gammas[row]

    def node_gammas(self) -> np.ndarray:
        """Per-node marginal flip probabilities (column means for per-cell laws)."""
        if self.mode is MisclassMode.PER_NODE:
            return self.gammas
        return self.gammas.mean(axis=0)

    def candidates_above(self, threshold: float, statistic: str = 'mean') -> FrozenSet[int]:
        """
        Nodes whose flip probability exceeds the threshold.

        Per-cell laws are summarized per node by their mean (default) or
        their maximum over observations.
        """
        if statistic == 'mean':
            summary = self.node_gammas()
        elif statistic == 'max':
            summary = self.gammas if self.mode is MisclassMode.PER_NODE else self.gammas.max(axis=0)
        else:
            raise ValueError(f"Unknown candidate statistic: {statistic!r}")
        return frozenset(int(s) for s in np.flatnonzero(summary > threshold))

    def to_dict(self) -> dict:
        return {'mode': self.mode.value, 'gammas': self.gammas.tolist()}

    @classmethod
    def from_dict(cls, data: dict) -> 'MisclassLaw':
        try:
            return cls(MisclassMode(data['mode']), np.asarray(data['gammas'], dtype=float))
        except KeyError as e:
            raise ValueError(f"Malformed misclassification law: missing {e}")
