"""
Caching utilities for symprod
"""

import threading
from collections import OrderedDict
from typing import Any, Dict, Hashable, Tuple


class LRUCache:
    """
    Least Recently Used (LRU) cache

    Thread-safe: every access holds a lock, so memoized results are the
    same whether or not callers share the cache across threads.
    """

    def __init__(self, max_size: int = 4096):
        self.max_size = max_size
        self._cache: "OrderedDict[Hashable, Any]" = OrderedDict()
        self._lock = threading.Lock()
        self._hits = 0
        self._misses = 0

    def lookup(self, key: Hashable) -> Tuple[bool, Any]:
        """Return ``(found, value)``; ``None`` is a valid cached value."""
        with self._lock:
            if key not in self._cache:
                self._misses += 1
                return False, None
            self._cache.move_to_end(key)
            self._hits += 1
            return True, self._cache[key]

    def set(self, key: Hashable, value: Any) -> None:
        """Set value in cache"""
        with self._lock:
            if key in self._cache:
                self._cache.move_to_end(key)
            self._cache[key] = value

            if len(self._cache) > self.max_size:
                self._cache.popitem(last=False)

    def __len__(self) -> int:
        return len(self._cache)

    def get_stats(self) -> Dict[str, Any]:
        """Get cache statistics"""
        total_requests = self._hits + self._misses
        hit_rate = self._hits / total_requests if total_requests > 0 else 0.0

        return {
            "size": len(self._cache),
            "max_size": self.max_size,
            "hits": self._hits,
            "misses": self._misses,
            "hit_rate": hit_rate,
        }
