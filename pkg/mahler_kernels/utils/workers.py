"""
Worker Threads

Thread-pool helpers shared by grid evaluation and convergence tables. The
pool size is capped by the MAHLER_KERNELS_THREADS environment variable;
every task writes its own result slot, so results never depend on the
number of workers.
"""

import logging
import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, List, Optional, Sequence, TypeVar

logger = logging.getLogger("mahler_kernels.workers")

THREADS_ENV_VAR = "MAHLER_KERNELS_THREADS"

T = TypeVar("T")
R = TypeVar("R")


def thread_limit(environ: Optional[dict] = None) -> int:
    """
    Number of worker threads allowed for this process.

    Args:
        environ: Mapping to read instead of os.environ

    Returns:
        The configured cap, os.cpu_count() when unset, 1 for invalid values
    """
    environ = os.environ if environ is None else environ
    raw = environ.get(THREADS_ENV_VAR)
    if raw is None or raw == "":
        return os.cpu_count() or 1
    try:
        value = int(raw)
    except ValueError:
        value = 0
    if value < 1:
        logger.warning(f"Ignoring {THREADS_ENV_VAR}={raw!r}, using 1 thread")
        return 1
    return value


def map_ordered(
    fn: Callable[[T], R], items: Sequence[T], threads: Optional[int] = None
) -> List[R]:
    """
    Apply fn to every item, in parallel when allowed, keeping input order.

    Exceptions raised by fn propagate to the caller.
    """
    threads = thread_limit() if threads is None else threads
    if threads <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=min(threads, len(items))) as pool:
        return list(pool.map(fn, items))
