"""Shared low-level helpers: errors, integer log, thread handling."""
import os
import warnings

import numba
import numpy as np
from numba.cpython.unsafe.numbers import leading_zeros
from numba import njit

# The bundled TBB is often too old and numba warns on every probe; try it last.
if "NUMBA_THREADING_LAYER" not in os.environ:
    numba.config.THREADING_LAYER_PRIORITY = ["omp", "workqueue", "tbb"]

# Larger than any int32 value; used as "no candidate yet" in kernels.
VALUE_INF = np.int64(1) << 40


class RMQError(Exception):
    """Base class for errors raised by this package."""


class EmptyInputError(RMQError, ValueError):
    """Raised when an operation needs a non-empty array."""


class InvariantError(RMQError):
    """Raised when internal structures disagree (corrupted pipeline)."""


class ConfigurationError(RMQError, ValueError):
    """Raised for invalid algorithm parameters."""


@njit(cache=True, inline="always")
def ilog2(x):
    # x >= 1; a single count-leading-zeros instruction
    return 63 - np.int64(leading_zeros(np.uint64(x)))


def floor_log2(x: int) -> int:
    """Largest ``e`` with ``2**e <= x``.

    >>> floor_log2(48829)
    15
    """
    x = int(x)
    if x < 1:
        raise ValueError(f"floor_log2 is defined for x >= 1, got {x}")
    return x.bit_length() - 1


def as_values(values) -> np.ndarray:
    """Coerce to a contiguous int32 array, rejecting out-of-range input."""
    arr = np.asarray(values)
    if arr.ndim != 1:
        raise ValueError("values must be one-dimensional")
    if arr.dtype != np.int32:
        if arr.size and (arr.min() < np.iinfo(np.int32).min or arr.max() > np.iinfo(np.int32).max):
            raise ValueError("values must fit in signed 32 bits")
        arr = arr.astype(np.int32)
    return np.ascontiguousarray(arr)


def use_threads(thread_count: int) -> int:
    """Configure numba's worker pool and return the effective thread count.

    The request is clamped to the pool size numba was started with
    (``NUMBA_NUM_THREADS``).
    """
    if thread_count < 1:
        raise ConfigurationError("thread_count must be >= 1")
    limit = numba.config.NUMBA_NUM_THREADS
    if thread_count > limit:
        warnings.warn(
            f"requested {thread_count} threads but numba pool has {limit}; "
            "set NUMBA_NUM_THREADS to raise the limit",
            RuntimeWarning,
            stacklevel=2,
        )
        thread_count = limit
    numba.set_num_threads(thread_count)
    return thread_count


@njit(cache=True, inline="always")
def min_value(values, lo, hi):
    """``min(values[lo..hi])``.

    Unsigned indices spare numba's negative-index fixup, which is what lets
    LLVM vectorize the reduction.
    """
    one = np.uint64(1)
    i = np.uint64(lo)
    end = np.uint64(hi)
    m = values[i]
    while i <= end:
        m = min(m, values[i])
        i += one
    return m


@njit(cache=True, inline="always")
def find_value(values, lo, v):
    """First ``i >= lo`` with ``values[i] == v``; the value must occur."""
    i = np.uint64(lo)
    while values[i] != v:
        i += np.uint64(1)
    return np.int64(i)
