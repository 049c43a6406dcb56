"""Order-preserving parallel map; worker count from LW_THREADS (default 1)."""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor


def thread_count() -> int:
    try:
        return max(1, int(os.environ.get("LW_THREADS", "1")))
    except ValueError:
        return 1


def ordered_map(fn, items, threads: int | None = None) -> list:
    """``[fn(x) for x in items]``; results keep input order regardless of scheduling."""
    items = list(items)
    n = threads or thread_count()
    if n <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(fn, items))


def chunked(items, n_chunks: int) -> list[list]:
    items = list(items)
    if n_chunks <= 1:
        return [items]
    size = -(-len(items) // n_chunks)
    return [items[i:i + size] for i in range(0, len(items), size)]
