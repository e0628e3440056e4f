"""Worker-pool helper honouring the ``PB_THREADS`` environment variable."""
from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor


def worker_count() -> int:
    """Pool size: ``PB_THREADS`` if set, else the usable CPU count."""
    raw = os.environ.get("PB_THREADS", "").strip()
    if raw:
        try:
            n = int(raw)
        except ValueError:
            raise ValueError(f"PB_THREADS must be a positive integer, got {raw!r}") from None
        if n < 1:
            raise ValueError("PB_THREADS must be >= 1")
        return n
    try:
        return max(1, len(os.sched_getaffinity(0)))
    except AttributeError:  # pragma: no cover - non-Linux
        return max(1, os.cpu_count() or 1)


def pmap(fn, items, min_items: int = 2):
    """Ordered map; uses a process pool only when it can help.

    Results are identical to ``list(map(fn, items))`` regardless of the
    worker count, since every task is a pure function of its argument.
    """
    items = list(items)
    workers = min(worker_count(), len(items))
    if workers < 2 or len(items) < min_items:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))
