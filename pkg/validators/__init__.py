#!/usr/bin/python3
"""
Validators package initialization.

This package provides validation functions for the data types
used throughout the engine, service and command line.
"""
from validators.validators import (
    validate_spins,
    validate_gammas,
    validate_lambda,
    validate_lambda_grid,
    parse_lambda_grid,
    validate_node,
    validate_nodes,
    validate_seed,
    parse_candidates,
    validate_aggregation,
    validate_positive_int,
    validate_shape
)

__all__ = [
    'validate_spins',
    'validate_gammas',
    'validate_lambda',
    'validate_lambda_grid',
    'parse_lambda_grid',
    'validate_node',
    'validate_nodes',
    'validate_seed',
    'parse_candidates',
    'validate_aggregation',
    'validate_positive_int',
    'validate_shape'
]
