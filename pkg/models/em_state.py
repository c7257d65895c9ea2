#!/usr/bin/python3
"""
This module defines the state carried by the EM edge refinement.

Classes:
    WeightTable: Posterior weights of candidate configurations per observation
    EMState: Current coefficients, fixed coefficients and partition
"""
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Tuple

import numpy as np

from models.graph import EdgeSetEstimate, NodePartition


@dataclass(frozen=True, eq=False)
class WeightTable:
    """
    E-step weights for one update-set component.

    Attributes:
        component (tuple): Sorted member nodes of the component
        candidates (tuple): Sorted candidate nodes of the component
        configs (np.ndarray): K x c candidate configurations
        weights (np.ndarray): n x K weights, each row summing to 1
    """
    component: Tuple[int, ...]
    candidates: Tuple[int, ...]
    configs: np.ndarray
    weights: np.ndarray

    @property
    def n(self) -> int:
        return self.weights.shape[0]


@dataclass(frozen=True, eq=False)
class EMState:
    """
    EM iteration state.

    Attributes:
        iteration (int): Completed EM updates k
        theta (np.ndarray): p x p coefficients theta^(k); row r is node r's
            regression. Entries between members of one component are updated,
            all others stay at their initial values.
        fixed_theta (np.ndarray): p x p coefficients of the initial fit
        partition (NodePartition): Candidate/participant split of U
        lam (float): Penalty of the M-step regressions
        edge_history (tuple): Edge set after each completed update
        audit (tuple): Per update, node -> (likelihood before, likelihood after)
    """
    iteration: int
    theta: np.ndarray
    fixed_theta: np.ndarray
    partition: NodePartition
    lam: float
    edge_history: Tuple[EdgeSetEstimate, ...] = ()
    audit: Tuple[Dict[int, Tuple[float, float]], ...] = ()

    def __post_init__(self):
        theta = np.array(self.theta, dtype=float)
        fixed = np.array(self.fixed_theta, dtype=float)
        if theta.shape != fixed.shape or theta.ndim != 2 or theta.shape[0] != theta.shape[1]:
            raise ValueError("Coefficient matrices must be square and of equal shape")
        theta.setflags(write=False)
        fixed.setflags(write=False)
        object.__setattr__(self, 'theta', theta)
        object.__setattr__(self, 'fixed_theta', fixed)

    @property
    def p(self) -> int:
        return self.theta.shape[0]

    def symmetric_theta(self) -> np.ndarray:
        """(theta_st + theta_ts) / 2 with zero diagonal."""
        sym = 0.5 * (self.theta + self.theta.T)
        np.fill_diagonal(sym, 0.0)
        return sym

    @property
    def theta_u(self) -> Dict[Tuple[int, int], float]:
        """Updated coefficients: ordered pairs (r, s) inside one component."""
        pairs = {}
        for component in self.partition.components:
            members = sorted(component)
            for r in members:
                for s in members:
                    if r != s:
                        pairs[(r, s)] = float(self.theta[r, s])
        return pairs

    def with_theta(self, theta: np.ndarray, edges: EdgeSetEstimate,
                   audit: Dict[int, Tuple[float, float]] = None) -> 'EMState':
        return EMState(
            iteration=self.iteration + 1,
            theta=theta,
            fixed_theta=self.fixed_theta,
            partition=self.partition,
            lam=self.lam,
            edge_history=self.edge_history + (edges,),
            audit=self.audit + ((audit,) if audit is not None else ()),
        )

    def to_dict(self) -> dict:
        return {
            'iteration': self.iteration,
            'lambda': self.lam,
            'partition': self.partition.to_dict(),
            'theta_u': [[r, s, value] for (r, s), value in sorted(self.theta_u.items())],
            'edge_history': [edges.to_dict()['edges'] for edges in self.edge_history],
            'audit': [
                {str(r): {'before': before, 'after': after} for r, (before, after) in sorted(entry.items())}
                for entry in self.audit
            ],
        }
