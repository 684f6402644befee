import concurrent.futures as futures
import os

#: Environment variable consulted when no explicit worker count is given
WORKERS_ENV = "NEUTRALLDP_WORKERS"


def max_workers(threads=None):
    """Worker count for thread pools: ``threads``, else $NEUTRALLDP_WORKERS, else None."""
    if threads is not None:
        return max(1, int(threads))
    try:
        return max(1, int(os.environ.get(WORKERS_ENV)))
    except (ValueError, TypeError):
        return None


def ordered_map(func, items, threads=None):
    """``[func(item) for item in items]`` evaluated on a thread pool, results in input order."""
    items = list(items)
    with futures.ThreadPoolExecutor(max_workers=max_workers(threads)) as executor:
        pending = {executor.submit(func, item): index for index, item in enumerate(items)}
        results = [None] * len(items)
        for future in futures.as_completed(pending):
            results[pending[future]] = future.result()
    return results
