#!/usr/bin/python3
"""
This module defines regression problems and neighborhood estimates.

Classes:
    LogRegProblem: Weighted, offset-aware l1-penalized logistic regression
    LogRegSolution: Solver output and diagnostics
    NeighborhoodEstimate: One node's regression coefficients
    RwlFit: Node-wise fits aggregated into an edge set
"""
import math
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, List, Optional, Tuple

import numpy as np

from models.graph import EdgeSetEstimate
from validators.validators import validate_aggregation, validate_lambda


@dataclass(frozen=True, eq=False)
class LogRegProblem:
    """
    Penalized logistic regression with the linear predictor offset + 2 * design @ theta.

    Attributes:
        design (np.ndarray): m x k predictors
        response (np.ndarray): m entries in {-1, +1}
        lam (float): l1 penalty weight
        sample_weights (np.ndarray): m non-negative weights (default all 1)
        offsets (np.ndarray): m fixed linear-predictor terms (default 0)
        fixed_penalty (float): Constant added to the reported objective
        intercept (bool): Fit an unpenalized intercept
    """
    design: np.ndarray
    response: np.ndarray
    lam: float
    sample_weights: Optional[np.ndarray] = None
    offsets: Optional[np.ndarray] = None
    fixed_penalty: float = 0.0
    intercept: bool = False

    def __post_init__(self):
        design = np.asarray(self.design, dtype=float)
        if design.ndim == 1:
            design = design[:, None]
        m = design.shape[0]
        response = np.asarray(self.response, dtype=float).reshape(-1)
        if response.shape != (m,):
            raise ValueError(f"Response has {response.shape[0]} rows, design has {m}")
        if not np.all((response == 1) | (response == -1)):
            raise ValueError("Response entries must be exactly -1 or +1")
        weights = np.ones(m) if self.sample_weights is None else np.asarray(self.sample_weights, dtype=float)
        if weights.shape != (m,) or not np.all(np.isfinite(weights)) or np.any(weights < 0):
            raise ValueError("Sample weights must be m finite non-negative numbers")
        offsets = np.zeros(m) if self.offsets is None else np.asarray(self.offsets, dtype=float)
        if offsets.shape != (m,) or not np.all(np.isfinite(offsets)):
            raise ValueError("Offsets must be m finite numbers")
        if not np.all(np.isfinite(design)):
            raise ValueError("Design entries must be finite")
        if not math.isfinite(self.fixed_penalty):
            raise ValueError("Fixed penalty must be finite")
        object.__setattr__(self, 'design', design)
        object.__setattr__(self, 'response', response)
        object.__setattr__(self, 'sample_weights', weights)
        object.__setattr__(self, 'offsets', offsets)
        object.__setattr__(self, 'lam', validate_lambda(self.lam))

    @property
    def m(self) -> int:
        return self.design.shape[0]

    @property
    def k(self) -> int:
        return self.design.shape[1]

    def with_lambda(self, lam: float) -> 'LogRegProblem':
        return LogRegProblem(self.design, self.response, lam, self.sample_weights,
                             self.offsets, self.fixed_penalty, self.intercept)


@dataclass(frozen=True, eq=False)
class LogRegSolution:
    """
    Result of a penalized logistic fit.

    Attributes:
        coefficients (np.ndarray): k coefficients on the theta scale
        objective (float): Weighted mean loss + penalty + fixed penalty
        kkt_residual (float): Largest KKT violation at the solution
        iterations (int): Coordinate sweeps performed
        converged (bool): Whether the residual reached the tolerance
        intercept (float): Fitted intercept (0 when not fitted)
    """
    coefficients: np.ndarray
    objective: float
    kkt_residual: float
    iterations: int
    converged: bool
    intercept: float = 0.0

    def to_dict(self) -> dict:
        return {
            'objective': self.objective,
            'kkt_residual': self.kkt_residual,
            'iterations': self.iterations,
            'converged': self.converged,
        }


@dataclass(frozen=True)
class NeighborhoodEstimate:
    """
    Coefficients of one node's regression on the other nodes.

    Attributes:
        node (int): Response node r
        coefficients (dict): Other node -> coefficient on the theta scale
    """
    node: int
    coefficients: Dict[int, float]

    def __post_init__(self):
        if self.node in self.coefficients:
            raise ValueError(f"Node {self.node} cannot have a self-coefficient")

    @property
    def support(self) -> FrozenSet[int]:
        """Estimated neighborhood N(r)."""
        return frozenset(s for s, value in self.coefficients.items() if value != 0)


@dataclass(frozen=True)
class RwlFit:
    """
    Neighborhood-selection fit.

    Attributes:
        neighborhoods (tuple): One NeighborhoodEstimate per node, ordered by node
        edge_set (EdgeSetEstimate): Aggregated edges
        lam (float): Shared penalty weight
        aggregation (str): 'and' or 'or'
        diagnostics (tuple): Solver record per node
    """
    neighborhoods: Tuple[NeighborhoodEstimate, ...]
    edge_set: EdgeSetEstimate
    lam: float
    aggregation: str = 'and'
    diagnostics: Tuple[dict, ...] = field(default=(), compare=False)

    def __post_init__(self):
        object.__setattr__(self, 'aggregation', validate_aggregation(self.aggregation))
        expected = EdgeSetEstimate.from_coefficients(self.coefficient_matrix(), self.aggregation)
        if expected.edges != self.edge_set.edges:
            raise ValueError("Edge set is inconsistent with the neighborhoods")

    @property
    def p(self) -> int:
        return self.edge_set.p

    def coefficient_matrix(self) -> np.ndarray:
        """p x p matrix whose row r holds node r's coefficients."""
        p = self.edge_set.p
        theta = np.zeros((p, p))
        for estimate in self.neighborhoods:
            for s, value in estimate.coefficients.items():
                theta[estimate.node, s] = value
        return theta

    @classmethod
    def from_coefficients(cls, theta: np.ndarray, lam: float, aggregation: str = 'and',
                          diagnostics: Tuple[dict, ...] = ()) -> 'RwlFit':
        p = theta.shape[0]
        neighborhoods = tuple(
            NeighborhoodEstimate(r, {s: float(theta[r, s]) for s in range(p) if s != r})
            for r in range(p)
        )
        edge_set = EdgeSetEstimate.from_coefficients(theta, validate_aggregation(aggregation))
        return cls(neighborhoods, edge_set, lam, aggregation, diagnostics)

    def to_dict(self) -> dict:
        return {
            'p': self.p,
            'lambda': self.lam,
            'aggregation': self.aggregation,
            'neighborhoods': [
                {'node': estimate.node,
                 'coefficients': {str(s): v for s, v in sorted(estimate.coefficients.items())}}
                for estimate in self.neighborhoods
            ],
            'edges': [list(edge) for edge in sorted(self.edge_set.edges)],
            'diagnostics': list(self.diagnostics),
        }

    @classmethod
    def from_dict(cls, data: dict) -> 'RwlFit':
        try:
            p = int(data['p'])
            theta = np.zeros((p, p))
            for entry in data['neighborhoods']:
                r = int(entry['node'])
                for s, value in entry['coefficients'].items():
                    theta[r, int(s)] = float(value)
            return cls.from_coefficients(theta, float(data['lambda']), data.get('aggregation', 'and'),
                                         tuple(data.get('diagnostics', ())))
        except (KeyError, TypeError, IndexError) as e:
            raise ValueError(f"Malformed fit description: {e}")
