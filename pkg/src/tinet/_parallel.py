import os
from concurrent.futures import ThreadPoolExecutor


def thread_count():
    """Worker cap from ``TINET_THREADS`` (default 1, i.e. serial)."""
    try:
        return max(1, int(os.environ.get("TINET_THREADS", "1")))
    except ValueError:
        return 1


def ordered_map(fn, items):
    """``list(map(fn, items))``, optionally threaded; order is preserved."""
    items = list(items)
    n = thread_count()
    if n == 1 or len(items) < 2 * n:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(fn, items))


def chunked_map(fn, *stacks):
    """Apply ``fn`` to aligned slices of ``stacks`` and concatenate.

    Results are stacked in input order, so the output does not depend on the
    worker count.
    """
    import numpy as np

    n = thread_count()
    size = len(stacks[0])
    if n == 1 or size < 2 * n:
        return fn(*stacks)
    bounds = np.linspace(0, size, n + 1).astype(int)
    parts = [[s[a:b] for s in stacks] for a, b in zip(bounds[:-1], bounds[1:])]
    with ThreadPoolExecutor(max_workers=n) as pool:
        out = list(pool.map(lambda c: fn(*c), parts))
    return np.concatenate(out)
