#!/usr/bin/python3
"""
Numerical core of isingmis.

This package holds the Ising distributions, the sparse logistic solver,
neighborhood selection, the EM edge refinement, theory diagnostics and the
simulation harness. Engine-specific failures share the IsingMisError base.

Classes:
    IsingMisError: Base class of engine errors
    EnumerationLimitError: Node count above the exact enumeration limit
    CandidateLimitError: Too many candidates in one update-set component
    MissingGammaError: Misclassification probability missing for a candidate
    DegenerateProblemError: Regression problem without usable weight
"""


class IsingMisError(Exception):
    """Base class of engine errors."""


class EnumerationLimitError(IsingMisError):
    """Raised when 2^p enumeration would exceed the configured limit."""


class CandidateLimitError(IsingMisError):
    """Raised when a component holds more candidates than the E-step allows."""


class MissingGammaError(IsingMisError):
    """Raised when a candidate has no misclassification probability."""


class DegenerateProblemError(IsingMisError):
    """Raised when every sample weight of a regression is zero."""


__all__ = [
    'IsingMisError',
    'EnumerationLimitError',
    'CandidateLimitError',
    'MissingGammaError',
    'DegenerateProblemError'
]
