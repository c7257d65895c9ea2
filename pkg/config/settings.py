#!/usr/bin/python3
"""
Runtime settings for the isingmis engine, service and command line.

Values are read from the environment (a local .env file is loaded first)
so that limits and solver defaults can be tuned without code changes.
"""
from os import getenv
from dotenv import load_dotenv

load_dotenv()

# Enumeration and E-step limits
EXACT_LIMIT = int(getenv('ISINGMIS_EXACT_LIMIT', 20))
C_MAX = int(getenv('ISINGMIS_C_MAX', 20))

# Solver defaults
SOLVER_TOLERANCE = float(getenv('ISINGMIS_SOLVER_TOL', 1e-7))
SOLVER_MAX_ITER = int(getenv('ISINGMIS_SOLVER_MAX_ITER', 100000))

# Gibbs sampler defaults, in full sweeps over the nodes
GIBBS_BURN_IN = int(getenv('ISINGMIS_GIBBS_BURN_IN', 1000))
GIBBS_THIN = int(getenv('ISINGMIS_GIBBS_THIN', 10))

# Result cache
REDIS_HOST = getenv('REDIS_HOST', 'localhost')
REDIS_PORT = int(getenv('REDIS_PORT', 6379))
REDIS_DB = int(getenv('REDIS_DB', 0))
CACHE_EXPIRY = int(getenv('ISINGMIS_CACHE_EXPIRY', 3600))  # 1 hour in seconds

LOG_LEVEL = getenv('LOG_LEVEL', 'INFO')


def thread_count(default: int = 1) -> int:
    """
    Number of concurrent replication workers.

    Read at call time so that ISINGMIS_THREADS set after import still applies.

    Args:
        default: Value used when the variable is unset

    Returns:
        int: Worker count, at least 1
    """
    value = getenv('ISINGMIS_THREADS')
    if not value:
        return max(1, default)
    try:
        return max(1, int(value))
    except ValueError:
        raise ValueError(f"ISINGMIS_THREADS must be an integer, got {value!r}")
