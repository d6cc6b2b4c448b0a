"""Ordered thread-pool map. Results never depend on the thread count."""
import os
from concurrent.futures import ThreadPoolExecutor

ENV_VAR = "TORUS_HARMONICS_THREADS"
_threads = None


def set_threads(n):
    global _threads
    _threads = None if n is None else max(1, int(n))


def get_threads():
    if _threads is not None:
        return _threads
    env = os.environ.get(ENV_VAR)
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def pmap(fn, items):
    items = list(items)
    threads = min(get_threads(), len(items))
    if threads <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=threads) as ex:
        return list(ex.map(fn, items))
