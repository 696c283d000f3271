"""Order-preserving map over stream ids, serial or across processes."""

from __future__ import annotations

import multiprocessing
import os
from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Sequence, TypeVar

T = TypeVar("T")

WORKERS_ENV = "DISKHULL_WORKERS"


def default_workers() -> int:
    raw = os.environ.get(WORKERS_ENV)
    if raw is None:
        return 1
    n = int(raw)
    if n < 1:
        raise ValueError(f"{WORKERS_ENV} must be a positive integer, got {raw!r}")
    return n


def _blocks(n: int, n_blocks: int) -> list[range]:
    edges = [round(i * n / n_blocks) for i in range(n_blocks + 1)]
    return [range(a, b) for a, b in zip(edges[:-1], edges[1:]) if b > a]


def map_streams(
    fn: Callable[[range], Sequence[T]],
    n: int,
    workers: int | None = None,
    blocks_per_worker: int = 4,
) -> list[T]:
    """Apply ``fn`` to contiguous blocks of ``range(n)`` and concatenate the
    per-stream results in stream order.

    ``fn`` must be a picklable module-level callable (or a partial of one)
    returning one item per stream id in the block.
    """
    workers = default_workers() if workers is None else int(workers)
    if workers < 1:
        raise ValueError("workers must be >= 1")
    if workers == 1 or n < 2:
        return list(fn(range(n)))
    blocks = _blocks(n, workers * blocks_per_worker)
    ctx = multiprocessing.get_context("fork")
    out: list[T] = []
    with ProcessPoolExecutor(max_workers=workers, mp_context=ctx) as pool:
        for part in pool.map(fn, blocks):
            out.extend(part)
    return out
