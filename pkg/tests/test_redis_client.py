#!/usr/bin/python3
"""
Report cache unittest module
"""

import json
import unittest
from unittest.mock import patch

import redis

from utils.redis_client import REPORT_VERSION, RedisClient, cache_key


class CacheKeyTests(unittest.TestCase):
    """Request keys."""

    def test_key_ignores_field_order(self):
        first = cache_key('diagnostics', {'n': 200, 'graph': {'p': 2, 'edges': []}})
        second = cache_key('diagnostics', {'graph': {'edges': [], 'p': 2}, 'n': 200})
        self.assertEqual(first, second)
        self.assertTrue(first.startswith(f"diagnostics:v{REPORT_VERSION}:"))

    def test_key_depends_on_kind_and_request(self):
        self.assertNotEqual(cache_key('diagnostics', {'n': 1}), cache_key('diagnostics', {'n': 2}))
        self.assertNotEqual(cache_key('diagnostics', {'n': 1}), cache_key('fits', {'n': 1}))

    def test_non_finite_request_is_rejected(self):
        with self.assertRaises(ValueError):
            cache_key('diagnostics', {'lambda': float('nan')})


class ReportCacheTests(unittest.TestCase):
    """Envelopes stored through a mocked Redis connection."""

    def setUp(self):
        RedisClient._instance = None
        patcher = patch('utils.redis_client.redis.Redis')
        self.mock_redis = patcher.start().return_value
        self.addCleanup(patcher.stop)
        self.addCleanup(setattr, RedisClient, '_instance', None)
        self.cache = RedisClient()
        self.request = {'graph': {'p': 2, 'edges': [[0, 1, 0.5]]}, 'n': 100}

    def test_store_writes_versioned_envelope(self):
        self.assertTrue(self.cache.store_report('diagnostics', self.request, {'p': 2, 's_max': 0.3}))
        key, payload = self.mock_redis.set.call_args[0]
        self.assertEqual(key, cache_key('diagnostics', self.request))
        self.assertEqual(json.loads(payload), {'version': REPORT_VERSION, 'report': {'p': 2, 's_max': 0.3}})

    def test_get_unwraps_envelope(self):
        self.mock_redis.get.return_value = json.dumps({'version': REPORT_VERSION, 'report': {'p': 2}})
        self.assertEqual(self.cache.get_report('diagnostics', self.request), {'p': 2})
        self.mock_redis.get.assert_called_once_with(cache_key('diagnostics', self.request))

    def test_other_version_is_a_miss(self):
        self.mock_redis.get.return_value = json.dumps({'version': REPORT_VERSION + 1, 'report': {'p': 2}})
        self.assertIsNone(self.cache.get_report('diagnostics', self.request))

    def test_corrupt_entry_is_a_miss(self):
        self.mock_redis.get.return_value = '{not json'
        with self.assertLogs('utils.redis_client', level='ERROR'):
            self.assertIsNone(self.cache.get_report('diagnostics', self.request))

    def test_non_finite_report_is_not_cached(self):
        with self.assertLogs('utils.redis_client', level='WARNING'):
            stored = self.cache.store_report('diagnostics', self.request, {'lambda_tilde': float('inf')})
        self.assertFalse(stored)
        self.mock_redis.set.assert_not_called()

    def test_redis_errors_degrade(self):
        self.mock_redis.get.side_effect = redis.RedisError("down")
        self.mock_redis.set.side_effect = redis.RedisError("down")
        with self.assertLogs('utils.redis_client', level='ERROR'):
            self.assertIsNone(self.cache.get_report('diagnostics', self.request))
            self.assertFalse(self.cache.store_report('diagnostics', self.request, {'p': 2}))


class UnavailableCacheTests(unittest.TestCase):
    """No Redis server."""

    def setUp(self):
        RedisClient._instance = None
        self.addCleanup(setattr, RedisClient, '_instance', None)

    @patch('utils.redis_client.redis.Redis')
    def test_unreachable_server_disables_cache(self, mock_redis_class):
        mock_redis_class.return_value.ping.side_effect = redis.ConnectionError("refused")
        with self.assertLogs('utils.redis_client', level='WARNING'):
            cache = RedisClient()
        self.assertFalse(cache.available)
        self.assertIsNone(cache.get_report('diagnostics', {'n': 1}))
        self.assertFalse(cache.store_report('diagnostics', {'n': 1}, {'p': 1}))


if __name__ == '__main__':
    unittest.main()
