"""Call logging and timing helpers."""

import functools
import logging
import time


def log(ret_callback=None):
    """Log the function call and, optionally, a summary of its result."""
    def decorator(func):
        @functools.wraps(func)
        def wrapper(*args, **kwargs):
            logging.debug('Calling %s with %s %s', func.__name__, args, kwargs)
            result = func(*args, **kwargs)
            if ret_callback is not None and logging.getLogger().isEnabledFor(logging.DEBUG):
                logging.debug('Result of calling %s: %s',
                              func.__name__,
                              ret_callback(result))
            return result
        return wrapper

    return decorator


class Stopwatch:
    """Measure wall-clock milliseconds of a `with` block."""

    def __init__(self):
        self.start = None
        self.elapsed_ms = 0.0

    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed_ms = (time.perf_counter() - self.start) * 1000.0
        return False
