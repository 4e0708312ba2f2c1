"""Thread-pool helper honoring the DDC_THREADS environment variable."""

import os
from concurrent.futures import ThreadPoolExecutor


def thread_count() -> int:
    """Worker count: DDC_THREADS if set (min 1), else the CPU count."""
    raw = os.environ.get("DDC_THREADS")
    if raw is not None:
        try:
            return max(1, int(raw))
        except ValueError:
            pass
    return os.cpu_count() or 1


def parallel_map(fn, items):
    """Map fn over items, preserving input order in the output list.

    Worker count comes from thread_count(); a single worker degrades to a
    plain loop so results are schedule-independent either way.
    """
    items = list(items)
    workers = min(thread_count(), max(1, len(items)))
    if workers == 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))
