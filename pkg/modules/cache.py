"""
In-memory memoization for scheme computations.
Hom-posets and extremal paths are recomputed many times by the checks in
computad and invariant_suite; results are cached per scheme fingerprint.
"""

import hashlib
import logging
import threading
import time
from functools import wraps
from typing import Any, Callable, Dict

# Configure logging
logger = logging.getLogger(__name__)

_MISSING = object()


class MemoCache:
    """
    Thread-safe LRU cache keyed by md5 digests of call arguments.
    """

    def __init__(self, max_items: int = 4096):
        """
        Initialize the cache.

        Args:
            max_items: Maximum number of entries kept before LRU eviction
        """
        self.max_items = max_items
        self.memory_cache: Dict[str, Any] = {}
        self.access_times: Dict[str, float] = {}
        self.lock = threading.RLock()
        self.hits = 0
        self.misses = 0

    def generate_key(self, prefix: str, *args, **kwargs) -> str:
        """
        Generate a cache key from arguments.

        Objects with a ``fingerprint`` attribute (pasting schemes) contribute
        the fingerprint instead of their repr.

        Args:
            prefix: Key prefix
            *args, **kwargs: Arguments to include in key

        Returns:
            str: Cache key
        """
        parts = [getattr(a, "fingerprint", None) or repr(a) for a in args]
        key_data = f"{prefix}:{parts}:{sorted((k, repr(v)) for k, v in kwargs.items())}"
        return hashlib.md5(key_data.encode()).hexdigest()

    def get(self, key: str, default: Any = None) -> Any:
        with self.lock:
            if key not in self.memory_cache:
                self.misses += 1
                return default
            self.hits += 1
            self.access_times[key] = time.monotonic()
            return self.memory_cache[key]

    def set(self, key: str, value: Any) -> None:
        with self.lock:
            self.memory_cache[key] = value
            self.access_times[key] = time.monotonic()
            if len(self.memory_cache) > self.max_items:
                self._evict()

    def _evict(self) -> None:
        """Drop least recently used entries down to max_items."""
        sorted_keys = sorted(self.access_times.items(), key=lambda x: x[1])
        to_remove = len(self.memory_cache) - self.max_items
        for key, _ in sorted_keys[:to_remove]:
            self.memory_cache.pop(key, None)
            self.access_times.pop(key, None)
        logger.debug(f"Evicted {to_remove} cache entries")

    def clear(self) -> None:
        with self.lock:
            self.memory_cache = {}
            self.access_times = {}
            self.hits = 0
            self.misses = 0

    def get_stats(self) -> Dict[str, Any]:
        """
        Get cache statistics.

        Returns:
            dict: entry count, hits, misses and hit rate in percent
        """
        with self.lock:
            lookups = self.hits + self.misses
            return {
                "items": len(self.memory_cache),
                "hits": self.hits,
                "misses": self.misses,
                "hit_rate": (self.hits / lookups) * 100 if lookups else 0.0,
            }


# Shared by the scheme computations
scheme_cache = MemoCache()


def memoize(cache: MemoCache, prefix: str):
    """
    Decorator to memoize a pure function of a pasting scheme.

    Args:
        cache: MemoCache instance
        prefix: Cache key prefix
    """
    def decorator(func: Callable):
        @wraps(func)
        def wrapper(*args, **kwargs):
            force_refresh = kwargs.pop("force_refresh", False)
            key = cache.generate_key(prefix, *args, **kwargs)
            if not force_refresh:
                cached_value = cache.get(key, _MISSING)
                if cached_value is not _MISSING:
                    return cached_value
            result = func(*args, **kwargs)
            cache.set(key, result)
            return result
        return wrapper
    return decorator
