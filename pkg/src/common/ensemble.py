"""
Order-preserving parallel map over independent work items.

Work items are grid points, ensemble chunks or property-sweep trials. With one
thread the map runs in-process; with more it is distributed over a local Spark
pool. Results are keyed by input index and returned in input order, so output
row order never depends on completion order.

The environment variable MAXWELL_THREADS overrides the default thread count.
"""

import logging
import os
from collections.abc import Callable, Sequence
from typing import TypeVar

logger = logging.getLogger(__name__)

THREADS_ENV = "MAXWELL_THREADS"

A = TypeVar("A")
B = TypeVar("B")


def resolve_threads(threads: int | None = None) -> int:
    """Explicit value wins, then MAXWELL_THREADS, then 1."""
    if threads is not None:
        return max(1, int(threads))
    env = os.environ.get(THREADS_ENV)
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            logger.warning("ignoring non-integer %s=%r", THREADS_ENV, env)
    return 1


def parallel_map(
    fn: Callable[[A], B],
    items: Sequence[A],
    threads: int | None = None,
    name: str | None = None,
) -> list[B]:
    """
    Apply ``fn`` to every item, serially or on a local Spark pool.

    Args:
        fn: Pure function of one item (must be picklable for the Spark path)
        items: Work items
        threads: Worker count; None defers to MAXWELL_THREADS
        name: Spark application suffix (e.g. the experiment name)

    Returns:
        [fn(item) for item in items], in input order
    """
    n_threads = resolve_threads(threads)
    items = list(items)
    if n_threads <= 1 or len(items) <= 1:
        return [fn(item) for item in items]

    # Imported lazily: the serial path must not require a JVM
    from src.common.spark_session import get_spark_context

    sc = get_spark_context(name, threads=n_threads)
    logger.info("distributing %d items over %d workers", len(items), n_threads)
    indexed = sc.parallelize(list(enumerate(items)), numSlices=min(len(items), 4 * n_threads))
    keyed = indexed.map(lambda pair: (pair[0], fn(pair[1]))).collect()
    return [value for _, value in sorted(keyed, key=lambda pair: pair[0])]
