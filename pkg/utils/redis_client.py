#!/usr/bin/python3
"""
Redis-backed cache of computed reports.

A report is stored under a key derived from its kind and the canonical
request that produced it, wrapped in an envelope carrying the report
format version. Entries written under another version read as misses.
The cache is optional: when Redis cannot be reached every lookup misses
and every store is skipped.

Classes:
    RedisClient: Singleton report cache

Functions:
    cache_key: Stable key of a JSON-serializable request
"""
import hashlib
import json
import logging
from typing import Any, Optional

import redis

from config.settings import CACHE_EXPIRY, REDIS_DB, REDIS_HOST, REDIS_PORT

logger = logging.getLogger(__name__)

REPORT_VERSION = 1


def _canonical(payload: Any) -> str:
    """Sorted-key compact JSON; raises ValueError on NaN or infinity."""
    return json.dumps(payload, sort_keys=True, separators=(',', ':'), allow_nan=False)


def cache_key(kind: str, request: Any) -> str:
    """kind:v<version>:<sha256 of the canonical request>."""
    digest = hashlib.sha256(_canonical(request).encode()).hexdigest()
    return f"{kind}:v{REPORT_VERSION}:{digest}"


class RedisClient:
    """
    Singleton Redis client holding report envelopes.

    Attributes:
        _instance: Singleton instance
        client: Redis client connection, None when Redis is unavailable
    """
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
            try:
                cls._instance.client = redis.Redis(
                    host=REDIS_HOST,
                    port=REDIS_PORT,
                    db=REDIS_DB,
                    decode_responses=True
                )
                cls._instance.client.ping()
                logger.info("Connected to Redis successfully.")
            except redis.ConnectionError as e:
                logger.warning(f"Redis unavailable, report cache disabled: {e}")
                cls._instance.client = None
        return cls._instance

    @property
    def available(self) -> bool:
        return self.client is not None

    def get_report(self, kind: str, request: Any) -> Optional[dict]:
        """
        Cached report for a request.

        Args:
            kind: Report kind, e.g. 'diagnostics'
            request: Canonical request the report was computed from

        Returns:
            dict or None: The report, None on a miss, a stale version or any failure
        """
        if not self.available:
            return None
        try:
            key = cache_key(kind, request)
            raw = self.client.get(key)
            if not raw:
                return None
            envelope = json.loads(raw)
        except (redis.RedisError, ValueError, TypeError) as e:
            logger.error(f"Failed to read cached {kind} report: {e}")
            return None
        if not isinstance(envelope, dict) or envelope.get('version') != REPORT_VERSION:
            logger.info(f"Ignoring {kind} report cached under another format version")
            return None
        return envelope.get('report')

    def store_report(self, kind: str, request: Any, report: dict,
                     expire: Optional[int] = CACHE_EXPIRY) -> bool:
        """
        Cache a report for a request.

        Reports with NaN or infinite values are not cached.

        Returns:
            bool: Whether the report was written
        """
        if not self.available:
            return False
        try:
            key = cache_key(kind, request)
            payload = _canonical({'version': REPORT_VERSION, 'report': report})
        except (ValueError, TypeError) as e:
            logger.warning(f"{kind} report not cached: {e}")
            return False
        try:
            self.client.set(key, payload, ex=expire)
        except redis.RedisError as e:
            logger.error(f"Failed to cache {kind} report: {e}")
            return False
        return True
