import sys
from functools import wraps
from time import time

import psutil


def timeit(func):
    # Reports the execution time and the resident memory after the call
    # of the function object passed
    @wraps(func)
    def wrap_func(*args, **kwargs):
        t1 = time()
        result = func(*args, **kwargs)
        t2 = time()
        memory = psutil.Process().memory_info().rss / 1024 ** 2
        print(f'Function {func.__name__!r} executed in {(t2 - t1):.4f}s ({memory:,.1f} MB resident)',
              file=sys.stderr)
        return result

    return wrap_func


def sign(n: int) -> int:
    """Returns :math:`(-1)^n` for any integer ``n``."""
    return -1 if n % 2 else 1


def c2(n: int) -> int:
    """Binomial coefficient ``n choose 2`` extended to every integer as ``n(n-1)/2``."""
    return n * (n - 1) // 2


def log(tag: str, message: str, verbose: bool = True):
    """Prints a progress message to the standard error, prefixed by ``[tag]``."""
    if verbose:
        print(f'[{tag}] {message}', file=sys.stderr)
