import logging
import os
from collections.abc import Callable, Iterable
from concurrent.futures import ThreadPoolExecutor
from typing import TypeVar

logger = logging.getLogger(__name__)

THREADS_ENV_VAR = "SHTUKA_CRIT_THREADS"
SCHEMA_VERSION = 1

T = TypeVar("T")
R = TypeVar("R")


def get_thread_count() -> int:
    """
    Resolve the number of worker threads for parallel evaluation.

    Reads ``SHTUKA_CRIT_THREADS``; anything that is not a positive integer is
    ignored with a warning and the hardware count is used instead.

    Returns:
        A positive thread count

    Examples:
        >>> from unittest.mock import patch
        >>> with patch.dict(os.environ, {"SHTUKA_CRIT_THREADS": "1"}):
        ...     get_thread_count()
        1
    """
    raw = os.environ.get(THREADS_ENV_VAR)
    if raw is not None:
        try:
            value = int(raw)
        except ValueError:
            value = 0
        if value >= 1:
            return value
        logger.warning(f"Ignoring {THREADS_ENV_VAR}={raw!r}: not a positive integer")
    return os.cpu_count() or 1


def parallel_map(fn: Callable[[T], R], items: Iterable[T]) -> list[R]:
    """
    Apply ``fn`` to every item, possibly in parallel, keeping input order.

    Args:
        fn: A pure function
        items: Inputs

    Returns:
        ``[fn(x) for x in items]``
    """
    items = list(items)
    workers = min(get_thread_count(), len(items))
    if workers <= 1:
        return [fn(item) for item in items]
    logger.debug(f"Evaluating {len(items)} tasks on {workers} threads")
    with ThreadPoolExecutor(max_workers=workers) as executor:
        return list(executor.map(fn, items))
