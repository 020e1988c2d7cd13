"""Deterministic block decomposition for Monte Carlo work.

A job of ``n`` draws is cut into blocks of :data:`BLOCK_SIZE`; block ``b``
gets its own generator seeded from ``(seed, b)``. Block results are always
reduced in block order, so the answer does not depend on how many worker
processes computed them.
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor

import numpy as np

BLOCK_SIZE = 2 ** 16


def block_rng(seed: int, block: int, stream: int = 0) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(int(seed), spawn_key=(stream, block)))


def block_sizes(n: int, block_size: int = BLOCK_SIZE):
    full, rest = divmod(int(n), block_size)
    return [block_size] * full + ([rest] if rest else [])


def default_workers() -> int:
    return os.cpu_count() or 1


def map_blocks(fn, args_list, workers: int = 1):
    """``[fn(*args) for args in args_list]``, optionally across processes, in order."""
    if workers <= 1 or len(args_list) <= 1:
        return [fn(*args) for args in args_list]
    with ProcessPoolExecutor(max_workers=min(workers, len(args_list))) as pool:
        futures = [pool.submit(fn, *args) for args in args_list]
        return [f.result() for f in futures]


def merge_moments(parts):
    """Combine per-block ``(count, mean, M2)`` triples in the given order (Chan et al.)."""
    n, mean, m2 = 0, 0.0, 0.0
    for nb, mb, m2b in parts:
        if nb == 0:
            continue
        tot = n + nb
        delta = mb - mean
        mean += delta * nb / tot
        m2 += m2b + delta * delta * n * nb / tot
        n = tot
    return n, mean, m2
