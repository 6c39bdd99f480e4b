"""Order-preserving parallel map over independent tasks."""
from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor


def ordered_imap(func, items, jobs: int = 1):
    """Yield ``func(x)`` for each item, in input order, using ``jobs`` processes.

    Output order never depends on scheduling, so reports assembled from it
    are identical for every degree of parallelism.
    """
    items = list(items)
    if jobs < 1:
        raise ValueError("jobs must be >= 1")
    if jobs == 1 or len(items) < 2:
        for x in items:
            yield func(x)
        return
    with ProcessPoolExecutor(max_workers=min(jobs, len(items))) as pool:
        yield from pool.map(func, items)


def ordered_map(func, items, jobs: int = 1):
    return list(ordered_imap(func, items, jobs))
