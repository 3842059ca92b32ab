"""Seeded test data: shuffled permutations and uniform query pairs.

Randomness comes from SplitMix64 (state advances by ``0x9E3779B97F4A7C15``,
output mixed with multipliers ``0xBF58476D1CE4E5B9`` and
``0x94D049BB133111EB`` and shifts 30, 27, 31).  An index in ``[0, n)`` is
``next() % n``.  The streams are therefore easy to reproduce in any
language with 64-bit unsigned arithmetic.
"""
import numpy as np
from numba import njit

from ..core import QueryBatch

GOLDEN = 0x9E3779B97F4A7C15
MIX1 = 0xBF58476D1CE4E5B9
MIX2 = 0x94D049BB133111EB
_MASK64 = (1 << 64) - 1


class SplitMix64:
    """Pure-Python reference stream, handy for cross-checking the kernels."""

    def __init__(self, seed: int):
        self.state = int(seed) & _MASK64

    def next(self) -> int:
        self.state = (self.state + GOLDEN) & _MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * MIX1) & _MASK64
        z = ((z ^ (z >> 27)) * MIX2) & _MASK64
        return z ^ (z >> 31)


@njit(cache=True, inline="always")
def _next(state):
    s = state + np.uint64(GOLDEN)
    z = s
    z = (z ^ (z >> np.uint64(30))) * np.uint64(MIX1)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(MIX2)
    return s, z ^ (z >> np.uint64(31))


@njit(cache=True)
def _shuffle_pairs(values, seed):
    n = np.uint64(values.size)
    s = np.uint64(seed)
    for _ in range(values.size // 2):
        s, x = _next(s)
        i = np.int64(x % n)
        s, x = _next(s)
        j = np.int64(x % n)
        t = values[i]
        values[i] = values[j]
        values[j] = t


@njit(cache=True)
def _uniform_pairs(n, seed, left, right):
    nn = np.uint64(n)
    s = np.uint64(seed)
    for i in range(left.size):
        s, x = _next(s)
        a = np.int64(x % nn)
        s, x = _next(s)
        b = np.int64(x % nn)
        left[i] = min(a, b)
        right[i] = max(a, b)


def _seed64(seed: int) -> np.uint64:
    return np.uint64(int(seed) & _MASK64)


def gen_permutation(n: int, seed: int) -> np.ndarray:
    """``[1 .. n]`` after ``n // 2`` swaps of uniformly drawn index pairs (members may coincide)."""
    n = int(n)
    if n < 0 or n >= 2**31:
        raise ValueError(f"n must be in [0, 2**31), got {n}")
    values = np.arange(1, n + 1, dtype=np.int32)
    if n > 1:
        _shuffle_pairs(values, _seed64(seed))
    return values


def gen_queries(n: int, q: int, seed: int) -> QueryBatch:
    """``q`` ranges with both endpoints uniform over ``[0, n)``, swapped into order."""
    n, q = int(n), int(q)
    if n < 1:
        raise ValueError("gen_queries needs n >= 1")
    if q < 0:
        raise ValueError("q must be non-negative")
    left = np.empty(q, np.int64)
    right = np.empty(q, np.int64)
    if q:
        _uniform_pairs(n, _seed64(seed), left, right)
    return QueryBatch(left, right)
