"""
Merel's Heilbronn family X_n = {[[a, b], [c, d]] : a > b >= 0, d > c >= 0, ad - bc = n}.

On Manin symbols for Gamma_1(M), T_n [u:v] = sum over X_n of [(u, v) h], terms with
gcd(u', v', M) > 1 dropped; for n | M the same sum is U_n.
"""
from functools import lru_cache
from typing import List, Optional, Tuple
import threading

from loguru import logger

from src.audit.store import CacheStore

Heilbronn = Tuple[int, int, int, int]

_STORE: Optional[CacheStore] = None
_lock = threading.Lock()


def use_store(store: Optional[CacheStore]) -> None:
    """Back the Heilbronn sets with an on-disk cache (None disables it)."""
    global _STORE
    with _lock:
        _STORE = store
    merel_set.cache_clear()


def _enumerate(n: int) -> List[Heilbronn]:
    out: List[Heilbronn] = []
    # ad - bc = n with b < a, c < d forces a + d <= n + 1
    for a in range(1, n + 1):
        for d in range(1, n + 2 - a):
            if a * d == n:
                out.extend((a, 0, c, d) for c in range(d))
                out.extend((a, b, 0, d) for b in range(1, a))
            excess = a * d - n
            if excess <= 0:
                continue
            for b in range(1, a):
                if excess % b == 0 and excess // b < d:
                    out.append((a, b, excess // b, d))
    return out


@lru_cache(maxsize=None)
def merel_set(n: int) -> Tuple[Heilbronn, ...]:
    if n < 1:
        raise ValueError("n must be positive")
    store = _STORE
    if store is not None:
        cached = store.load_heilbronn(n)
        if cached is not None:
            return tuple(cached)
    matrices = _enumerate(n)
    if store is not None:
        store.save_heilbronn(n, matrices)
    logger.bind(event="heilbronn", n=n).debug(f"{len(matrices)} matrices")
    return tuple(matrices)
