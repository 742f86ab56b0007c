# Author: Muthana
# © 2026 Muthana. All rights reserved.
# Unauthorized copying or distribution is prohibited.

import hashlib
import json
import logging
import threading
import time
from functools import wraps
from typing import Any, Dict, Optional

from . import config

logger = logging.getLogger(__name__)


class SimpleCache:
    """In-memory TTL cache for computed results."""

    def __init__(self, default_ttl: int = 300, max_size: int = 256):
        self._cache: Dict[str, tuple[Any, float]] = {}
        self._lock = threading.Lock()
        self.default_ttl = default_ttl
        self.max_size = max_size
        self._hits = 0
        self._misses = 0
        self._last_cleanup = time.time()

    def get(self, key: str) -> Optional[Any]:
        with self._lock:
            self._cleanup_expired()
            if key in self._cache:
                value, expiry = self._cache[key]
                if time.time() < expiry:
                    self._hits += 1
                    return value
                del self._cache[key]
            self._misses += 1
            return None

    def set(self, key: str, value: Any, ttl: Optional[int] = None):
        expiry = time.time() + (ttl or self.default_ttl)
        with self._lock:
            if key not in self._cache and len(self._cache) >= self.max_size:
                self._evict_oldest()
            self._cache[key] = (value, expiry)

    def clear(self):
        with self._lock:
            self._cache.clear()
            self._hits = 0
            self._misses = 0

    def _cleanup_expired(self):
        # at most once a minute
        now = time.time()
        if now - self._last_cleanup < 60:
            return
        expired = [key for key, (_, expiry) in self._cache.items() if now >= expiry]
        for key in expired:
            del self._cache[key]
        self._last_cleanup = now
        if expired:
            logger.info(f"cache cleanup: {len(expired)} expired keys removed")

    def _evict_oldest(self):
        if not self._cache:
            return
        oldest = min(self._cache, key=lambda k: self._cache[k][1])
        del self._cache[oldest]

    def stats(self) -> dict:
        total = self._hits + self._misses
        hit_rate = (self._hits / total * 100) if total > 0 else 0
        return {
            "size": len(self._cache),
            "hits": self._hits,
            "misses": self._misses,
            "hit_rate": f"{hit_rate:.2f}%",
        }


cache = SimpleCache(default_ttl=config.CACHE_TTL)


def cache_key(*args, **kwargs) -> str:
    """sha256 of the JSON-encoded arguments; pydantic bodies hash by their field values."""
    payload = json.dumps({"args": args, "kwargs": kwargs}, sort_keys=True, default=_encode)
    return hashlib.sha256(payload.encode()).hexdigest()


def _encode(value: Any) -> Any:
    if hasattr(value, "model_dump"):
        return value.model_dump(mode="json")
    return str(value)


def cached(ttl: Optional[int] = None, key_prefix: str = ""):
    """
    Memoize a function in the module cache.

        @cached(key_prefix="distance")
        def compute_distance(request: DistanceRequest): ...
    """
    def decorator(func):
        @wraps(func)
        def wrapper(*args, **kwargs):
            key = f"{key_prefix}:{func.__name__}:{cache_key(*args, **kwargs)}"
            value = cache.get(key)
            if value is not None:
                return value
            value = func(*args, **kwargs)
            cache.set(key, value, ttl)
            return value

        return wrapper
    return decorator
