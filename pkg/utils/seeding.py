#!/usr/bin/python3
"""
Seed splitting for reproducible replications.

Replication i of a scenario with seed s uses the seed s XOR i, so any
range of replications can be rerun on its own and gives the same draws
as inside the full run. Each replication seed is expanded into
independent sub-seeds with numpy's SeedSequence.

Functions:
    replication_seed: Seed of replication i
    stream_seeds: Named sub-seeds of one replication
"""
from typing import Dict

import numpy as np

from validators.validators import validate_positive_int, validate_seed

# Order matters: adding a stream at the end keeps the earlier ones unchanged
STREAMS = ('sampling', 'half_rows', 'flips')


def replication_seed(seed: int, replication: int) -> int:
    """seed XOR replication, kept in the unsigned 64-bit range."""
    replication = validate_positive_int(replication, "Replication index", minimum=0)
    return validate_seed(seed) ^ (replication % 2 ** 64)


def stream_seeds(seed: int) -> Dict[str, int]:
    """
    Independent sub-seeds of one replication.

    Args:
        seed: Replication seed

    Returns:
        Dict[str, int]: One seed per stream in STREAMS
    """
    states = np.random.SeedSequence(validate_seed(seed)).generate_state(len(STREAMS), dtype=np.uint64)
    return {name: int(state) for name, state in zip(STREAMS, states)}
