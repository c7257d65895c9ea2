#!/usr/bin/python3
"""
This module defines the theory diagnostics report.

Classes:
    NodeDiagnostics: Score, information and condition values of one node
    DiagnosticsReport: Node-wise values and the global checks
"""
import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np


@dataclass(frozen=True, eq=False)
class NodeDiagnostics:
    """
    Diagnostics of one node regression at the true coefficients.

    Attributes:
        node (int): Response node r
        neighbors (tuple): True neighbors of r (the support S)
        expected_score (np.ndarray): E(W_r) over the other p - 1 nodes
        information (np.ndarray): (p-1) x (p-1) misclassified information
        c_min (float): Smallest eigenvalue of the S x S block (inf when S is empty)
        incoherence (float): Max row sum of |Q_{S^c S} Q_SS^{-1}| (inf when Q_SS is singular)
        d_max (float): Largest eigenvalue of E[x~ x~'] over the other nodes
    """
    node: int
    neighbors: Tuple[int, ...]
    expected_score: np.ndarray
    information: np.ndarray
    c_min: float
    incoherence: float
    d_max: float

    @property
    def score_norm(self) -> float:
        return float(np.abs(self.expected_score).max()) if self.expected_score.size else 0.0

    def to_dict(self) -> dict:
        return {
            'node': self.node,
            'neighbors': list(self.neighbors),
            'expected_score': self.expected_score.tolist(),
            'information': self.information.tolist(),
            'c_min': _finite_or_none(self.c_min),
            'incoherence': _finite_or_none(self.incoherence),
            'd_max': self.d_max,
        }


def _finite_or_none(value: float) -> Optional[float]:
    return float(value) if math.isfinite(value) else None


@dataclass(frozen=True, eq=False)
class DiagnosticsReport:
    """
    Misclassified score/information summary and assumption checks.

    Attributes:
        per_node (tuple): NodeDiagnostics for every node
        n (int): Sample size the bound is evaluated at
        d (int): Maximum degree used in the misclassification condition
        s_max (float): Largest node-wise max-norm of the expected score
        c_min (float): Smallest dependency eigenvalue over nodes
        d_max (float): Largest second-moment eigenvalue over nodes
        alpha (float): 1 - largest incoherence value
        dependency_ok (bool): C_min > 0
        incoherence_ok (bool): alpha in (0, 1]
        a3_bound (float): C_min^2 alpha^2 / (400 D_max d (2 - alpha)^2), nan when undefined
        a3_satisfied (bool): All three conditions hold
        lambda_lower_bound (float): Regularization lower bound, inf when alpha <= 0
    """
    per_node: Tuple[NodeDiagnostics, ...]
    n: int
    d: int
    s_max: float
    c_min: float
    d_max: float
    alpha: float
    dependency_ok: bool
    incoherence_ok: bool
    a3_bound: float
    a3_satisfied: bool
    lambda_lower_bound: float

    @property
    def p(self) -> int:
        return len(self.per_node)

    def lambda_tilde(self, lam: float) -> float:
        """lam - (4 (2 - alpha) / alpha) * S_max; -inf when alpha <= 0."""
        if not self.incoherence_ok:
            return -math.inf
        return float(lam - (4.0 * (2.0 - self.alpha) / self.alpha) * self.s_max)

    def to_dict(self, lam: Optional[float] = None) -> dict:
        data = {
            'p': self.p,
            'n': self.n,
            'd': self.d,
            's_max': self.s_max,
            'c_min': _finite_or_none(self.c_min),
            'd_max': self.d_max,
            'alpha': _finite_or_none(self.alpha),
            'dependency_ok': self.dependency_ok,
            'incoherence_ok': self.incoherence_ok,
            'a3_bound': _finite_or_none(self.a3_bound),
            'a3_satisfied': self.a3_satisfied,
            'lambda_lower_bound': _finite_or_none(self.lambda_lower_bound),
            'per_node': [node.to_dict() for node in self.per_node],
        }
        if lam is not None:
            data['lambda'] = lam
            data['lambda_tilde'] = _finite_or_none(self.lambda_tilde(lam))
        return data
