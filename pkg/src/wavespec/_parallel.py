"""Process-pool fan-out for Monte Carlo work, capped by WAVESPEC_THREADS."""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor

THREADS_ENV = "WAVESPEC_THREADS"


def worker_count(requested: int | None = None) -> int:
    """Effective worker count: requested (or CPU count), capped by the env var."""
    count = requested if requested is not None else (os.cpu_count() or 1)
    cap = os.environ.get(THREADS_ENV)
    if cap:
        try:
            count = min(count, int(cap))
        except ValueError:
            pass
    return max(1, count)


def parallel_map(fn, items, workers: int) -> list:
    """Order-preserving map, in-process when one worker suffices.

    ``fn`` must be a module-level callable and items picklable when
    workers > 1.
    """
    items = list(items)
    if workers <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    chunk = max(1, len(items) // (workers * 4))
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items, chunksize=chunk))
