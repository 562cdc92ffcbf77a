"""Deterministic chunked evaluation over a thread pool.

Work is split into a fixed number of contiguous chunks independent of the
thread count, and results are reassembled in order, so outputs are bitwise
identical for any ``WL_THREADS``.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor

import numpy as np

N_CHUNKS = 16


def thread_count(threads: int | None = None) -> int:
    if threads is None:
        threads = int(os.environ.get("WL_THREADS", "1") or 1)
    return max(1, int(threads))


def chunked_map(func, n: int, threads: int | None = None) -> np.ndarray:
    """Evaluate ``func(index_array)`` on fixed chunks of range(n) and concatenate."""
    bounds = np.linspace(0, n, N_CHUNKS + 1).astype(int)
    chunks = [np.arange(a, b) for a, b in zip(bounds, bounds[1:]) if b > a]
    workers = thread_count(threads)
    if workers == 1:
        parts = [func(c) for c in chunks]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(func, chunks))
    return np.concatenate(parts)
