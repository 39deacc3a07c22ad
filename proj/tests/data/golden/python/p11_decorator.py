import functools


@functools.lru_cache(maxsize=None)
def fib(n: int) -> int:
    # base case
    if n < 2:
        return n
    return fib(n - 1) + fib(n - 2)
