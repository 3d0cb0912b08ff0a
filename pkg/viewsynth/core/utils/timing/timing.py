import functools
import time
from collections import defaultdict

from loguru import logger


class Timings:
    """Wall-clock of timed calls by name: last duration and call count."""

    def __init__(self):
        self.last: dict[str, float] = {}
        self.calls: dict[str, int] = defaultdict(int)

    def record(self, name: str, seconds: float) -> None:
        self.last[name] = seconds
        self.calls[name] += 1

    def reset(self, name: str | None = None) -> None:
        if name is None:
            self.last.clear()
            self.calls.clear()
        else:
            self.last.pop(name, None)
            self.calls.pop(name, None)


TIMINGS = Timings()


def timed(name: str):
    def decorator(func):
        @functools.wraps(func)
        def wrapper(*args, **kwargs):
            start_time = time.perf_counter()
            result = func(*args, **kwargs)
            elapsed = time.perf_counter() - start_time
            TIMINGS.record(name, elapsed)
            logger.debug(f"{name} took {elapsed:.4f}s")
            return result
        return wrapper
    return decorator
