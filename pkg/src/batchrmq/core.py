"""Domain types and the two reference RMQ oracles.

All ranges are 0-based and inclusive on both ends. The oracles here return
the *leftmost* minimum; the batched algorithms elsewhere only promise some
position holding the minimum.
"""
from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np
from numba import njit, prange

from ._util import EmptyInputError, InvariantError, as_values, floor_log2, ilog2
from .timing import null_timer


def as_input_array(values) -> np.ndarray:
    """Validate ``values`` as an input array (1-D, signed 32-bit)."""
    return as_values(values)


def position_dtype(n: int):
    """Narrowest signed dtype able to hold positions ``0 .. n - 1``."""
    return np.int32 if n < 2**31 else np.int64


@dataclass(frozen=True)
class Query:
    """Inclusive range ``[left, right]``; a reversed pair is swapped."""

    left: int
    right: int

    def __post_init__(self):
        left, right = int(self.left), int(self.right)
        if left > right:
            left, right = right, left
        if left < 0:
            raise IndexError(f"query ({left}, {right}) has a negative endpoint")
        object.__setattr__(self, "left", left)
        object.__setattr__(self, "right", right)


class QueryBatch:
    """``q`` inclusive ranges stored as two int64 columns.

    Position in the batch is the query's identity; every solver returns
    answers in this order.
    """

    __slots__ = ("left", "right")

    def __init__(self, left, right):
        left = np.asarray(left, dtype=np.int64).ravel()
        right = np.asarray(right, dtype=np.int64).ravel()
        if left.shape != right.shape:
            raise ValueError("left and right must have equal length")
        lo = np.minimum(left, right)
        hi = np.maximum(left, right)
        if lo.size and lo.min() < 0:
            raise IndexError("query endpoints must be non-negative")
        self.left = np.ascontiguousarray(lo)
        self.right = np.ascontiguousarray(hi)

    @classmethod
    def from_pairs(cls, pairs: Sequence[Union[Query, Sequence[int]]]) -> "QueryBatch":
        if len(pairs) == 0:
            return cls.empty()
        arr = np.array([(p.left, p.right) if isinstance(p, Query) else tuple(p) for p in pairs],
                       dtype=np.int64)
        return cls(arr[:, 0], arr[:, 1])

    @classmethod
    def empty(cls) -> "QueryBatch":
        return cls(np.empty(0, np.int64), np.empty(0, np.int64))

    def __len__(self):
        return self.left.size

    def __getitem__(self, i) -> Query:
        return Query(int(self.left[i]), int(self.right[i]))

    def __iter__(self):
        for i in range(len(self)):
            yield self[i]

    def check_bounds(self, n: int):
        if len(self) and self.right.max() >= n:
            raise IndexError(f"query endpoint {int(self.right.max())} out of range for n={n}")


def naive_rmq(array, q: Query) -> int:
    """Leftmost minimum position in ``array[q.left .. q.right]`` by linear scan."""
    a = np.asarray(array)
    if a.size == 0:
        raise EmptyInputError("naive_rmq needs a non-empty array")
    if not (0 <= q.left <= q.right < a.size):
        raise IndexError(f"query ({q.left}, {q.right}) out of range for n={a.size}")
    return q.left + int(np.argmin(a[q.left:q.right + 1]))


@njit(cache=True)
def _naive_batch(values, left, right, out):
    for i in prange(left.size):
        lo = left[i]
        best = lo
        bv = values[lo]
        for j in range(lo + 1, right[i] + 1):
            if values[j] < bv:
                bv = values[j]
                best = j
        out[i] = best


def solve_batch_naive(array, batch: QueryBatch, timer=None) -> np.ndarray:
    """Answer every query by scanning; O(sum of range lengths)."""
    timer = timer or null_timer()
    values = as_values(array)
    batch.check_bounds(values.size)
    out = np.empty(len(batch), np.int64)
    if len(batch):
        with timer.stage("answer"):
            _naive_batch(values, batch.left, batch.right, out)
    return out


@dataclass(frozen=True, eq=False)
class ElementSparseTable:
    """Minima positions of every power-of-two span of the array.

    ``table[i, j]`` is the leftmost minimum of ``A[j : j + 2**i]`` when that
    span fits inside the array and ``-1`` otherwise.  ``writes`` counts the
    valid entries that construction produced.
    """

    n: int
    levels: int
    table: np.ndarray
    writes: int

    @property
    def nbytes(self) -> int:
        return self.table.nbytes


@njit(cache=True)
def _build_doubling(values, table, n):
    writes = n
    for j in range(n):
        table[0, j] = j
    for i in range(1, table.shape[0]):
        half = 1 << (i - 1)
        fit = n - (1 << i) + 1
        prev = table[i - 1]
        row = table[i]
        for j in range(fit):
            a = prev[j]
            b = prev[j + half]
            row[j] = a if values[a] <= values[b] else b
        for j in range(fit, n):
            row[j] = -1
        writes += fit
    return writes


def build_element_sparse_table(array) -> ElementSparseTable:
    values = as_values(array)
    n = values.size
    if n == 0:
        raise EmptyInputError("cannot build a sparse table over an empty array")
    levels = floor_log2(n) + 1
    table = np.empty((levels, n), dtype=position_dtype(n))
    writes = _build_doubling(values, table, n)
    return ElementSparseTable(n=n, levels=levels, table=table, writes=int(writes))


def element_st_rmq(table: ElementSparseTable, array, q: Query) -> int:
    """Two-lookup query against a prebuilt :class:`ElementSparseTable`."""
    values = np.asarray(array)
    if values.size != table.n:
        raise InvariantError(f"table built for n={table.n}, array has n={values.size}")
    if not (0 <= q.left <= q.right < table.n):
        raise IndexError(f"query ({q.left}, {q.right}) out of range for n={table.n}")
    if q.left == q.right:
        return q.left
    e = floor_log2(q.right - q.left)
    a = int(table.table[e, q.left])
    b = int(table.table[e, q.right - (1 << e) + 1])
    return a if values[a] <= values[b] else b


@njit(cache=True)
def _sparse_batch(values, table, left, right, out):
    for i in prange(left.size):
        lo = left[i]
        hi = right[i]
        p = lo
        if hi > lo:
            e = ilog2(hi - lo)
            a = table[e, lo]
            b = table[e, hi - (1 << e) + 1]
            # leftmost on ties: ``a`` starts no later than ``b``
            p = a if values[a] <= values[b] else b
        out[i] = p


def solve_batch_sparse(array, batch: QueryBatch, timer=None) -> np.ndarray:
    """Classic full sparse table: O(n log n) build, O(1) per query."""
    timer = timer or null_timer()
    values = as_values(array)
    batch.check_bounds(values.size)
    out = np.empty(len(batch), np.int64)
    if len(batch) == 0:
        return out
    with timer.stage("build"):
        st = build_element_sparse_table(values)
    with timer.stage("answer"):
        _sparse_batch(values, st.table, batch.left, batch.right, out)
    return out
