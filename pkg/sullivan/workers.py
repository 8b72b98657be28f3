"""
sullivan.workers – bounded parallel map for independent verification batches.

Public function
---------------
    run_parallel(fn, items) -> list
        Calls fn(item) for every item, at most WORKERS at a time, and returns
        the results in input order (so reports never depend on scheduling).

Environment variables
---------------------
    SULLIVAN_WORKERS          max concurrent calls (default 4, 1 = inline loop)
"""

from __future__ import annotations
import asyncio, contextvars
from typing import Callable, Iterable, List, TypeVar

from sullivan.config import WORKERS

T = TypeVar("T")
R = TypeVar("R")

# semaphore shared by the tasks of one run_parallel call, set in _gather
_loop_sem: contextvars.ContextVar[asyncio.Semaphore] = contextvars.ContextVar("loop_sem")


def _get_semaphore(size: int) -> asyncio.Semaphore:
    """Semaphore of the enclosing _gather, or a fresh one outside it."""
    try:
        sem = _loop_sem.get()
    except LookupError:
        sem = asyncio.Semaphore(size)
        _loop_sem.set(sem)
    return sem


async def _bounded(fn, item, size: int):
    async with _get_semaphore(size):
        return await asyncio.to_thread(fn, item)


async def _gather(fn, items, size: int):
    # bind before the tasks copy the context, so they all share one semaphore
    _loop_sem.set(asyncio.Semaphore(size))
    return await asyncio.gather(*(_bounded(fn, it, size) for it in items))


def run_parallel(fn: Callable[[T], R], items: Iterable[T], *, workers: int | None = None) -> List[R]:
    items = list(items)
    size = WORKERS if workers is None else workers
    if size <= 1 or len(items) <= 1:
        return [fn(it) for it in items]
    try:
        asyncio.get_running_loop()
    except RuntimeError:
        return list(asyncio.run(_gather(fn, items, size)))
    # already inside an event loop (e.g. a notebook): stay inline
    return [fn(it) for it in items]
