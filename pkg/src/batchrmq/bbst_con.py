"""Block-based sparse table over the contracted array (BbST_CON).

Pipeline, per batch:

1. sort the ``2q`` endpoints and remap each query to area indices;
2. contract ``A`` to one minimum per area (``A_Q``);
3. build a sparse table whose cells are blocks of ``k`` entries of ``A_Q``;
4. answer each query from the inner span of whole blocks, reading the two
   endpoint-block minima speculatively and scanning a partial block only
   when its minimum could beat the current best.

The table stores positions and compares values through one indirection.
The optional value cache adds a parallel table of packed keys
``(value << 32) | label`` where ``label`` is the answer to report for that
cell (the A-position for a contracted table).  Keyed answering then needs
``A_Q`` only for the rare partial-block scans.
"""
from dataclasses import dataclass, replace
from typing import Optional

import numpy as np
from numba import njit, prange

from ._util import (VALUE_INF, ConfigurationError, as_values, find_value, ilog2, min_value,
                    use_threads)
from .contraction import (ContractedQueryBatch, build_directory, contract_with_boundary,
                          remap_with_directory, sorted_boundary)
from .core import QueryBatch, position_dtype
from .sorting import SORT_KINDS
from .timing import null_timer

DEFAULT_K = 512
KEY_INF = np.int64(0x7FFFFFFFFFFFFFFF)
_LABEL_MASK = np.int64(0xFFFFFFFF)


@dataclass(frozen=True, eq=False)
class BlockSparseTable:
    """Doubling table over ``b = ceil(m / k)`` blocks of an underlying array.

    ``entries[i, j]`` is a position (into the underlying array) of the
    minimum over blocks ``j .. j + 2**i - 1``; entries whose span runs past
    the last block are ``-1``.  ``keys`` is the optional value cache, same
    shape, ``(value << 32) | label`` per valid cell and ``KEY_INF`` elsewhere.
    """

    k: int
    m: int
    entries: np.ndarray
    keys: Optional[np.ndarray] = None

    @property
    def b(self) -> int:
        return self.entries.shape[1]

    @property
    def levels(self) -> int:
        return self.entries.shape[0]

    @property
    def cells(self) -> int:
        return self.entries.size


@dataclass(frozen=True)
class BbstConParams:
    k: int = DEFAULT_K
    sort_kind: str = "radix"
    thread_count: int = 1
    value_cache: bool = False

    def __post_init__(self):
        if self.k < 1:
            raise ConfigurationError(f"block size k must be >= 1, got {self.k}")
        if self.sort_kind not in SORT_KINDS:
            raise ConfigurationError(f"unknown sort kind {self.sort_kind!r}")
        if self.thread_count < 1:
            raise ConfigurationError("thread_count must be >= 1")


# -- construction -----------------------------------------------------------

def _block_minima_impl(values, k, out):
    m = values.size
    for j in prange(out.size):
        lo = j * k
        hi = min(m, lo + k)
        best = lo
        bv = values[lo]
        for i in range(lo + 1, hi):
            v = values[i]
            if v < bv:
                bv = v
                best = i
        out[j] = best


def _double_levels_impl(values, entries):
    b = entries.shape[1]
    for i in range(1, entries.shape[0]):
        half = 1 << (i - 1)
        fit = b - (1 << i) + 1
        prev = entries[i - 1]
        row = entries[i]
        for j in prange(fit):
            x = prev[j]
            y = prev[j + half]
            row[j] = x if values[x] <= values[y] else y
        for j in range(fit, b):
            row[j] = -1


def _pack_keys_impl(values, labels, entries, keys):
    for i in range(entries.shape[0]):
        for j in prange(entries.shape[1]):
            p = entries[i, j]
            if p < 0:
                keys[i, j] = KEY_INF
            else:
                lab = p if labels is None else labels[p]
                keys[i, j] = (np.int64(values[p]) << 32) | np.int64(lab)


_block_minima = njit(cache=True)(_block_minima_impl)
_block_minima_par = njit(parallel=True)(_block_minima_impl)
_double_levels = njit(cache=True)(_double_levels_impl)
_double_levels_par = njit(parallel=True)(_double_levels_impl)
_pack_keys = njit(cache=True)(_pack_keys_impl)
_pack_keys_par = njit(parallel=True)(_pack_keys_impl)


def table_from_block_minima(values: np.ndarray, k: int, level0: np.ndarray, threads: int = 1,
                            value_cache: bool = False, labels=None) -> BlockSparseTable:
    """Finish a :class:`BlockSparseTable` given its level-0 block minima.

    ``labels`` (default: the positions themselves) are what the value cache
    reports for each cell; they must fit in 32 bits.
    """
    b = level0.size
    levels = b.bit_length() if b else 0
    entries = np.empty((levels, b), position_dtype(values.size))
    if b:
        entries[0] = level0
        (_double_levels_par if threads > 1 else _double_levels)(values, entries)
    keys = None
    if value_cache:
        top = values.size if labels is None else (int(labels.max()) + 1 if labels.size else 0)
        if top > 2**32:
            raise ConfigurationError("the value cache packs labels into 32 bits")
        keys = np.empty(entries.shape, np.int64)
        (_pack_keys_par if threads > 1 else _pack_keys)(values, labels, entries, keys)
    return BlockSparseTable(k=k, m=values.size, entries=entries, keys=keys)


def build_block_sparse(values, k: int, threads: int = 1, value_cache: bool = False,
                       labels=None) -> BlockSparseTable:
    """Sparse table over blocks of ``k`` consecutive entries of ``values``.

    The trailing block may be shorter than ``k``; it is never padded.
    """
    if k < 1:
        raise ConfigurationError(f"block size k must be >= 1, got {k}")
    values = as_values(values)
    b = -(-values.size // k)
    level0 = np.empty(b, position_dtype(values.size))
    if b:
        (_block_minima_par if threads > 1 else _block_minima)(values, k, level0)
    return table_from_block_minima(values, k, level0, threads, value_cache, labels)


# -- queries --------------------------------------------------------------------
#
# The per-query logic is written out inside the batch loops.  Handing arrays
# to an inlined helper on the hot path makes numba emit reference counting
# per call, which costs several times the query itself; helpers that take
# arrays (``min_value``, ``find_value``, ``_key_at``) only run on the rare
# scan path.

def block_shift(k: int) -> int:
    """``log2(k)`` when ``k`` is a power of two, else ``-1`` (kernels then divide)."""
    return k.bit_length() - 1 if k & (k - 1) == 0 else -1


@njit(cache=True, inline="always")
def _block_of(x, k, kshift):
    if kshift >= 0:
        return x >> kshift
    return x // k


@njit(cache=True, inline="always")
def _key_at(values, labels, p):
    lab = p if labels is None else labels[p]
    return (np.int64(values[p]) << 32) | np.int64(lab)


def _answer_ranges_impl(values, entries, k, kshift, cleft, cright, left, origin, out, scans):
    """Positions through the table, values through one indirection.

    ``origin`` maps positions of ``values`` to answers; ``None`` is identity.
    """
    for i in prange(cleft.size):
        lo = cleft[i]
        hi = cright[i]
        s = 0
        if hi < lo:
            out[i] = left[i]
        else:
            bl = _block_of(lo, k, kshift)
            br = _block_of(hi, k, kshift)
            if bl == br:
                best = entries[0, bl]
                if best < lo or best > hi:
                    best = find_value(values, lo, min_value(values, lo, hi))
                    s = hi - lo + 1
            else:
                best = -1
                bv = VALUE_INF
                if br - bl > 1:
                    e = ilog2(br - bl - 1)
                    p1 = entries[e, bl + 1]
                    p2 = entries[e, br - (1 << e)]
                    v1 = np.int64(values[p1])
                    v2 = np.int64(values[p2])
                    best = p2 if v2 < v1 else p1
                    bv = min(v1, v2)
                # Endpoint blocks: a stored minimum inside the query is just a
                # candidate; one outside it forces a partial scan only when it
                # beats the best so far.  ``inside`` is a coin flip for random
                # queries, so it feeds selects and the branch is on the scan.
                p = entries[0, bl]
                v = np.int64(values[p])
                inside = p >= lo
                take = inside & (v <= bv)
                best = p if take else best
                bv = v if take else bv
                if (not inside) & (v < bv):
                    end = (bl + 1) * k - 1
                    sv = np.int64(min_value(values, lo, end))
                    s += end - lo + 1
                    if sv <= bv:
                        best, bv = find_value(values, lo, sv), sv
                p = entries[0, br]
                v = np.int64(values[p])
                inside = p <= hi
                take = inside & (v < bv)
                best = p if take else best
                bv = v if take else bv
                if (not inside) & (v < bv):
                    start = br * k
                    sv = np.int64(min_value(values, start, hi))
                    s += hi - start + 1
                    if sv < bv:
                        best, bv = find_value(values, start, sv), sv
            out[i] = best if origin is None else origin[best]
        if scans is not None:
            scans[i] = s


def _answer_keyed_impl(values, labels, keys, k, kshift, cleft, cright, left, right, out, scans):
    """Packed ``(value << 32) | label`` keys through the table.

    ``left .. right`` is each query in label coordinates.  A block minimum
    whose label lies in it is inside the query: for a contracted table an
    area outside ``[cleft, cright]`` can only reach the query on its shared
    boundary cell, which belongs to the query anyway.
    """
    for i in prange(cleft.size):
        lo = cleft[i]
        hi = cright[i]
        alo = left[i]
        ahi = right[i]
        s = 0
        if hi < lo:
            out[i] = alo
        else:
            bl = _block_of(lo, k, kshift)
            br = _block_of(hi, k, kshift)
            if bl == br:
                best = keys[0, bl]
                lab = best & _LABEL_MASK
                if lab < alo or lab > ahi:
                    best = _key_at(values, labels, find_value(values, lo, min_value(values, lo, hi)))
                    s = hi - lo + 1
            else:
                best = KEY_INF
                if br - bl > 1:
                    e = ilog2(br - bl - 1)
                    best = min(keys[e, bl + 1], keys[e, br - (1 << e)])
                kl = keys[0, bl]
                kr = keys[0, br]
                in_l = (kl & _LABEL_MASK) >= alo
                in_r = (kr & _LABEL_MASK) <= ahi
                best = min(best, kl) if in_l else best
                best = min(best, kr) if in_r else best
                if ((not in_l) & (kl < best)) | ((not in_r) & (kr < best)):
                    if (not in_l) & (kl < best):
                        end = (bl + 1) * k - 1
                        sv = np.int64(min_value(values, lo, end))
                        s += end - lo + 1
                        if (sv << 32) < best:
                            best = min(best, _key_at(values, labels, find_value(values, lo, sv)))
                    if (not in_r) & (kr < best):
                        start = br * k
                        sv = np.int64(min_value(values, start, hi))
                        s += hi - start + 1
                        if (sv << 32) < best:
                            best = min(best, _key_at(values, labels, find_value(values, start, sv)))
            out[i] = best & _LABEL_MASK
        if scans is not None:
            scans[i] = s


_answer_ranges = njit(cache=True)(_answer_ranges_impl)
_answer_ranges_par = njit(parallel=True)(_answer_ranges_impl)
_answer_keyed = njit(cache=True)(_answer_keyed_impl)
_answer_keyed_par = njit(parallel=True)(_answer_keyed_impl)


@njit(cache=True)
def _inner_span(values, entries, bl, br):
    if br - bl <= 1:
        return -1
    e = ilog2(br - bl - 1)
    p1 = entries[e, bl + 1]
    p2 = entries[e, br - (1 << e)]
    return p2 if values[p2] < values[p1] else p1


def inner_span_min(table: BlockSparseTable, values, bl: int, br: int) -> Optional[int]:
    """Minimum position over the blocks strictly between ``bl`` and ``br``.

    ``None`` when the endpoint blocks are adjacent or equal.
    """
    p = _inner_span(as_values(values), table.entries, bl, br)
    return None if p < 0 else int(p)


def answer_one(table: BlockSparseTable, values, origin_map, cq, stats: Optional[dict] = None) -> int:
    """Answer one contracted query ``cq = (cleft, cright)`` as a position in ``A``.

    When ``stats`` is given, ``stats["scanned"]`` is increased by the number
    of contracted cells scanned.
    """
    cl, cr = int(cq[0]), int(cq[1])
    if cr < cl:
        raise ValueError("degenerate queries are answered without the block table")
    one = ContractedQueryBatch(np.array([cl]), np.array([cr]), np.array([-1]))
    scans = np.zeros(1, np.int64)
    out = answer_contracted(replace(table, keys=None), as_values(values), np.asarray(origin_map),
                           one, scans=scans)
    if stats is not None:
        stats["scanned"] = stats.get("scanned", 0) + int(scans[0])
    return int(out[0])


def answer_contracted(table: BlockSparseTable, values: np.ndarray, origin: np.ndarray,
                      cq: ContractedQueryBatch, threads: int = 1, scans=None,
                      right: Optional[np.ndarray] = None) -> np.ndarray:
    """Answer pre-remapped queries; ``scans`` optionally receives per-query scan counts.

    A table with a value cache must have been built with ``labels=origin``
    and needs the original right endpoints ``right``.
    """
    out = np.empty(len(cq), np.int64)
    if len(cq) == 0:
        return out
    ks = block_shift(table.k)
    if table.keys is None:
        kernel = _answer_ranges_par if threads > 1 else _answer_ranges
        kernel(values, table.entries, table.k, ks, cq.cleft, cq.cright, cq.left, origin, out, scans)
    else:
        if right is None:
            raise ValueError("keyed answering needs the original right endpoints")
        kernel = _answer_keyed_par if threads > 1 else _answer_keyed
        kernel(values, origin, table.keys, table.k, ks, cq.cleft, cq.cright, cq.left, right, out, scans)
    return out


def solve_batch_bbst_con(array, batch: QueryBatch, params: BbstConParams = BbstConParams(),
                         timer=None, return_scans: bool = False):
    """Answer ``batch`` over ``array`` with BbST_CON; answers follow batch order.

    With ``return_scans`` also returns, per query, the number of contracted
    cells scanned in endpoint blocks (zero when speculation succeeded).
    """
    timer = timer or null_timer()
    values = as_values(array)
    batch.check_bounds(values.size)
    q = len(batch)
    scans = np.zeros(q, np.int64) if return_scans else None
    if q == 0:
        out = np.empty(0, np.int64)
        return (out, scans) if return_scans else out
    threads = use_threads(params.thread_count)
    with timer.stage("sort"):
        boundary = sorted_boundary(batch, kind=params.sort_kind, threads=threads)
        cq = remap_with_directory(batch, boundary, build_directory(boundary), threads, check=False)
    with timer.stage("contract"):
        contracted = contract_with_boundary(values, boundary, threads)
    with timer.stage("build"):
        table = build_block_sparse(contracted.aq_values, params.k, threads, params.value_cache,
                                   contracted.aq_origin)
    with timer.stage("answer"):
        out = answer_contracted(table, contracted.aq_values, contracted.aq_origin, cq, threads,
                                scans, batch.right)
    return (out, scans) if return_scans else out
