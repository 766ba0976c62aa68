from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, List, Optional, TypeVar

from loguru import logger

from src.settings import get_settings

T = TypeVar("T")
R = TypeVar("R")


def map_ordered(fn: Callable[[T], R], items: Iterable[T], threads: Optional[int] = None) -> List[R]:
    """Apply fn to every item; results come back in input order whatever the worker count."""
    items = list(items)
    threads = threads or get_settings().threads
    if threads <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    logger.bind(event="pool").debug(f"{len(items)} tasks on {threads} threads")
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))
