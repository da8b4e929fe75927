"""Process-pool sharding with ordered, deterministic reduction."""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Iterable, TypeVar

T = TypeVar("T")
R = TypeVar("R")


def default_workers() -> int:
    raw = os.environ.get("NILCOUNT_WORKERS")
    if raw:
        workers = int(raw)
        if workers < 1:
            raise ValueError("NILCOUNT_WORKERS must be >= 1")
        return workers
    return 1


def split_range(start: int, stop: int, chunk: int) -> list[tuple[int, int]]:
    return [(lo, min(lo + chunk, stop)) for lo in range(start, stop, chunk)]


def sharded_map(fn: Callable[[T], R], shards: Iterable[T], workers: int | None = None) -> list[R]:
    """Apply ``fn`` to every shard; results come back in shard order."""
    shards = list(shards)
    workers = default_workers() if workers is None else workers
    if workers < 1:
        raise ValueError("workers must be >= 1")
    if workers == 1 or len(shards) <= 1:
        return [fn(s) for s in shards]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, shards))
