import functools
import time
from typing import Any, Callable, Tuple


def timed(func: Callable) -> Callable[..., Tuple[Any, float]]:
    """Return (result, wall time in seconds) instead of result"""
    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        start = time.perf_counter()
        result = func(*args, **kwargs)
        return result, time.perf_counter() - start
    return wrapper
