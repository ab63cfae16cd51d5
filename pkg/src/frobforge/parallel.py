"""Order-preserving map over independent work items.

FROBFORGE_THREADS bounds the worker count (default 1).  Results come back
in input order, so output never depends on scheduling.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor


def threads() -> int:
    try:
        return max(1, int(os.environ.get("FROBFORGE_THREADS", "1")))
    except ValueError:
        return 1


def pmap(fn, items) -> list:
    items = list(items)
    n = threads()
    if n == 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=min(n, len(items))) as ex:
        return list(ex.map(fn, items))
