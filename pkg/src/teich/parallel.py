"""Thread fan-out capped by the ``TEICH_THREADS`` environment variable."""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor


def thread_count() -> int:
    cap = os.environ.get("TEICH_THREADS", "").strip()
    n = os.cpu_count() or 1
    if cap:
        try:
            n = min(n, max(1, int(cap)))
        except ValueError:
            raise ValueError(f"TEICH_THREADS must be an integer, got {cap!r}") from None
    return n


def pmap(fn, items, threads: int | None = None) -> list:
    """``[fn(x) for x in items]`` in input order, possibly on a thread pool."""
    items = list(items)
    n = thread_count() if threads is None else threads
    if n <= 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(fn, items))
