"""Query-endpoint sorting and array contraction.

The sorted, deduplicated endpoint positions ``b_0 < b_1 < ... < b_m`` cut
the array into areas ``A[b_t .. b_{t+1}]`` (both ends inclusive, so
neighbouring areas share one cell).  The contracted array holds one
minimum per area, which is all a query spanning whole areas can need.

A query ``[l, r]`` with ``l < r`` covers exactly the areas
``index(l) .. index(r) - 1`` where ``index`` is the rank in the boundary.
Ranks come from a :class:`BoundaryDirectory`, a bit vector over positions
interleaved with per-word prefix counts, so each lookup costs one cache line
and a popcount.
"""
from dataclasses import dataclass

import numpy as np
from numba import njit, prange

from ._util import InvariantError, as_values
from .core import QueryBatch
from .sorting import sort_keys

_LOW32 = np.uint64(0xFFFFFFFF)
_SHIFT = np.uint64(32)


@dataclass(frozen=True, eq=False)
class Endpoints:
    """Packed endpoints, ``(position << 32) | (2 * query_index + is_right)``."""

    keys: np.ndarray

    def __len__(self):
        return self.keys.size

    @property
    def pos(self) -> np.ndarray:
        return (self.keys >> _SHIFT).astype(np.int64)

    @property
    def query_index(self) -> np.ndarray:
        return ((self.keys & _LOW32) >> np.uint64(1)).astype(np.int64)

    @property
    def is_right(self) -> np.ndarray:
        return (self.keys & np.uint64(1)).astype(bool)


@dataclass(frozen=True, eq=False)
class ContractedArray:
    """Area minima plus the bookkeeping needed to map back into ``A``.

    ``reads`` is the number of cells of ``A`` touched while building it.
    """

    aq_values: np.ndarray
    aq_origin: np.ndarray
    boundary: np.ndarray
    reads: int = 0

    def __len__(self):
        return self.aq_values.size


@dataclass(frozen=True, eq=False)
class ContractedQueryBatch:
    """Queries expressed as inclusive ranges of areas.

    A degenerate query (``left == right``) has ``cright < cleft`` and is
    answered by its own index, kept in ``left``.
    """

    cleft: np.ndarray
    cright: np.ndarray
    left: np.ndarray

    @property
    def degenerate(self) -> np.ndarray:
        return self.cright < self.cleft

    def __len__(self):
        return self.cleft.size


@dataclass(frozen=True, eq=False)
class BoundaryDirectory:
    """Rank side table over boundary positions.

    ``words[2w]`` counts the boundary entries below ``64 w`` and
    ``words[2w + 1]`` has bit ``i`` set when ``64 w + i`` is in the boundary,
    so a rank is one cache line plus a popcount.
    """

    words: np.ndarray

    @property
    def nbytes(self) -> int:
        return self.words.nbytes


# -- endpoints as (position, origin) pairs ------------------------------------

def collect_endpoints(batch: QueryBatch) -> Endpoints:
    q = len(batch)
    if q >= 2**31:
        raise ValueError("at most 2**31 - 1 queries fit the 32-bit origin field")
    idx = np.arange(q, dtype=np.uint64) << np.uint64(1)
    keys = np.empty(2 * q, np.uint64)
    keys[0::2] = (batch.left.astype(np.uint64) << _SHIFT) | idx
    keys[1::2] = (batch.right.astype(np.uint64) << _SHIFT) | (idx | np.uint64(1))
    return Endpoints(keys)


def sort_endpoints(eps: Endpoints, kind: str = "radix", threads: int = 1) -> Endpoints:
    """Endpoints ordered by non-decreasing position (ties in any order)."""
    return Endpoints(sort_keys(eps.keys.copy(), kind=kind, threads=threads, shift0=32))


# -- boundary construction ------------------------------------------------------

@njit(cache=True)
def _unique_upper(keys, shift, out):
    # branch-free: always store, advance only on a new position
    sh = np.uint64(shift)
    out[0] = np.uint64(keys[0]) >> sh
    m = 1
    for i in range(1, keys.size):
        p = np.uint64(keys[i]) >> sh
        out[m] = p
        m += np.int64(p != (np.uint64(keys[i - 1]) >> sh))
    return m


def unique_positions(sorted_keys: np.ndarray, shift: int = 0, dtype=np.int64) -> np.ndarray:
    out = np.empty(sorted_keys.size, dtype)
    m = _unique_upper(sorted_keys, shift, out) if sorted_keys.size else 0
    return out[:m]


@njit(cache=True)
def _fill_positions(left, right, out):
    q = left.size
    for i in range(q):
        out[i] = left[i]
        out[q + i] = right[i]


def sorted_boundary(batch: QueryBatch, kind: str = "radix", threads: int = 1) -> np.ndarray:
    """Sorted distinct endpoint positions of ``batch`` (int32 when they fit)."""
    q = len(batch)
    if q == 0:
        return np.empty(0, np.int64)
    max_pos = int(batch.right.max())
    dtype = np.uint32 if max_pos < 2**32 else np.uint64
    keys = np.empty(2 * q, dtype)
    _fill_positions(batch.left, batch.right, keys)
    keys = sort_keys(keys, kind=kind, threads=threads, max_key=max_pos)
    return unique_positions(keys, dtype=np.int32 if max_pos < 2**31 else np.int64)


@njit(cache=True, inline="always")
def _popcount(x):
    x = x - ((x >> np.uint64(1)) & np.uint64(0x5555555555555555))
    x = (x & np.uint64(0x3333333333333333)) + ((x >> np.uint64(2)) & np.uint64(0x3333333333333333))
    x = (x + (x >> np.uint64(4))) & np.uint64(0x0F0F0F0F0F0F0F0F)
    return np.int64((x * np.uint64(0x0101010101010101)) >> np.uint64(56))


@njit(cache=True)
def _fill_directory(boundary, words):
    for t in range(boundary.size):
        p = boundary[t]
        words[2 * (p >> 6) + 1] |= np.uint64(1) << np.uint64(p & 63)
    total = 0
    for w in range(words.size // 2):
        words[2 * w] = total
        total += _popcount(words[2 * w + 1])


def build_directory(boundary: np.ndarray) -> BoundaryDirectory:
    nwords = (int(boundary[-1]) >> 6) + 1 if boundary.size else 0
    words = np.zeros(2 * nwords, np.uint64)
    if nwords:
        _fill_directory(boundary, words)
    return BoundaryDirectory(words)


@njit(cache=True)
def rank_of(words, p):
    """Number of boundary entries below ``p``, and whether ``p`` itself is one."""
    w = 2 * (p >> 6)
    bits = words[w + 1]
    bit = np.uint64(p & 63)
    below = bits & ((np.uint64(1) << bit) - np.uint64(1))
    return np.int64(words[w]) + _popcount(below), (bits >> bit) & np.uint64(1)


def _remap_impl(words, top, left, right, cleft, cright, check):
    # rank lookups written out: array-taking helpers cost refcounting per call
    bad = 0
    one = np.uint64(1)
    for i in prange(left.size):
        lo = left[i]
        hi = right[i]
        if hi > top:
            bad += 1
            continue
        w = 2 * (lo >> 6)
        bits = words[w + 1]
        bit = np.uint64(lo & 63)
        a = np.int64(words[w]) + _popcount(bits & ((one << bit) - one))
        found = (bits >> bit) & one
        w = 2 * (hi >> 6)
        bits = words[w + 1]
        bit = np.uint64(hi & 63)
        b = np.int64(words[w]) + _popcount(bits & ((one << bit) - one))
        found &= (bits >> bit) & one
        if check and found == 0:
            bad += 1
        cleft[i] = a
        cright[i] = b - 1
    return bad


_remap = njit(cache=True)(_remap_impl)
_remap_par = njit(parallel=True)(_remap_impl)


def remap_with_directory(batch: QueryBatch, boundary: np.ndarray, directory: BoundaryDirectory,
                         threads: int = 1, check: bool = True) -> ContractedQueryBatch:
    """Area ranges per query via ``directory``.

    ``check=False`` skips confirming that each endpoint is present in the
    boundary, which holds by construction when the boundary was built from
    this very batch.
    """
    q = len(batch)
    dtype = np.int32 if boundary.size < 2**31 else np.int64
    cleft = np.empty(q, dtype)
    cright = np.empty(q, dtype)
    if q:
        if boundary.size == 0:
            raise InvariantError("empty contraction boundary for a non-empty batch")
        kernel = _remap_par if threads > 1 else _remap
        if kernel(directory.words, boundary[-1], batch.left, batch.right, cleft, cright, check):
            raise InvariantError("a query endpoint is missing from the contraction boundary")
    return ContractedQueryBatch(cleft, cright, batch.left)


# -- contraction ------------------------------------------------------------------

def _area_minima_impl(values, boundary, aq_values, aq_origin, firsts):
    m = boundary.size - 1
    # half-open scans [b_t, b_{t+1}) read every cell once
    for t in prange(m):
        lo = boundary[t]
        best = lo
        bv = values[lo]
        firsts[t] = bv
        for i in range(lo + 1, boundary[t + 1]):
            v = values[i]
            if v < bv:
                bv = v
                best = i
        aq_values[t] = bv
        aq_origin[t] = best
    firsts[m] = values[boundary[m]]
    # close each area with its right boundary cell (first cell of the next)
    for t in prange(m):
        v = firsts[t + 1]
        if v < aq_values[t]:
            aq_values[t] = v
            aq_origin[t] = boundary[t + 1]


_area_minima = njit(cache=True)(_area_minima_impl)
_area_minima_par = njit(parallel=True)(_area_minima_impl)


def contract_with_boundary(values: np.ndarray, boundary: np.ndarray, threads: int = 1) -> ContractedArray:
    m = max(boundary.size - 1, 0)
    aq_values = np.empty(m, np.int32)
    aq_origin = np.empty(m, np.int32 if values.size < 2**31 else np.int64)
    if m == 0:
        return ContractedArray(aq_values, aq_origin, boundary, reads=0)
    firsts = np.empty(m + 1, np.int32)
    kernel = _area_minima_par if threads > 1 else _area_minima
    kernel(values, boundary, aq_values, aq_origin, firsts)
    reads = int(boundary[-1] - boundary[0] + 1)
    return ContractedArray(aq_values, aq_origin, boundary, reads=reads)


def build_contracted(array, sorted_eps: Endpoints, threads: int = 1) -> ContractedArray:
    """Contract ``array`` to one minimum per area between sorted endpoints.

    ``aq_origin[t]`` is the leftmost position of ``aq_values[t]`` within
    its area.  Endpoint positions must lie inside the array.
    """
    values = as_values(array)
    if len(sorted_eps) == 0:
        return ContractedArray(np.empty(0, np.int32), np.empty(0, np.int32), np.empty(0, np.int64))
    boundary = unique_positions(sorted_eps.keys, 32)
    if boundary[-1] >= values.size:
        raise IndexError(f"endpoint {int(boundary[-1])} out of range for n={values.size}")
    return contract_with_boundary(values, boundary, threads)


def remap_queries(batch: QueryBatch, contracted: ContractedArray) -> ContractedQueryBatch:
    """Translate each query into an inclusive range of area indices."""
    return remap_with_directory(batch, contracted.boundary, build_directory(contracted.boundary))
