"""
Tests for the ordered batch processor and the scheme memo cache.
"""

import logging
import os
import sys

import pytest

# Add the repository root to sys.path to import the modules
sys.path.append(os.path.dirname(os.path.abspath(__file__)))

from modules.batch_processing import BatchProcessor
from modules.cache import MemoCache, memoize
from modules.scheme_core import build_theta2

# Configure logging
logger = logging.getLogger(__name__)


def square_or_fail(n):
    if n == 3:
        raise ValueError("three is not allowed")
    return n * n


@pytest.mark.parametrize("workers,batch_size", [(1, 64), (4, 2), (8, 1)])
def test_results_keep_input_order(workers, batch_size):
    processor = BatchProcessor(max_workers=workers, batch_size=batch_size)
    results = processor.process_batch(list(range(6)), square_or_fail)
    assert [item for item, _, _ in results] == list(range(6))
    assert [value for _, value, _ in results] == [0, 1, 4, None, 16, 25]
    assert isinstance(results[3][2], ValueError)


def test_empty_batch():
    assert BatchProcessor().process_batch([], square_or_fail) == []


def test_memoize_keys_schemes_by_fingerprint():
    cache = MemoCache()
    calls = []

    @memoize(cache, "faces")
    def count_faces(ps):
        calls.append(ps)
        return len(ps.faces)

    assert count_faces(build_theta2([1, 2])) == 3
    assert count_faces(build_theta2([1, 2])) == 3
    assert len(calls) == 1
    assert count_faces(build_theta2([1, 2]), force_refresh=True) == 3
    assert len(calls) == 2
    stats = cache.get_stats()
    assert (stats["hits"], stats["items"]) == (1, 1)


def test_eviction_drops_the_oldest_entry():
    cache = MemoCache(max_items=2)
    cache.set("a", 1)
    cache.set("b", 2)
    cache.get("a")
    cache.set("c", 3)
    assert cache.get("b") is None
    assert cache.get("a") == 1 and cache.get("c") == 3
    cache.clear()
    assert cache.get_stats()["items"] == 0
