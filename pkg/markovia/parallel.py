"""Order-preserving parallel map capped by MARKOVIA_THREADS."""

from collections.abc import Callable, Iterable
from concurrent.futures import ThreadPoolExecutor
from typing import TypeVar

from .config import DEFAULT_SETTINGS, Settings

T = TypeVar("T")
R = TypeVar("R")


def ordered_map(
    fn: Callable[[T], R], items: Iterable[T], settings: Settings | None = None
) -> list[R]:
    """Apply fn to every item, returning results in input order."""
    items = list(items)
    threads = (settings or DEFAULT_SETTINGS).threads
    if threads <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=min(threads, len(items))) as pool:
        return list(pool.map(fn, items))
