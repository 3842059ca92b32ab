"""BbST straight on ``A`` (no contraction) and its multi-level variant.

With one block size ``k`` the structure is the block sparse table of
:mod:`batchrmq.bbst_con` built over the input itself, so queries need no
sorting at all.  With a chain ``k_1 < ... < k_h`` (each dividing the next)
the minima of every level of non-overlapping blocks are kept too.  When an
endpoint block at the top cannot be settled speculatively, its partial
range is covered by whole child blocks plus one partial child, and so on
downwards, until at most one ``k_1`` block per edge is scanned raw.
"""
import math
from dataclasses import dataclass
from typing import Optional, Sequence, Union

import numpy as np
from numba import njit, prange

from ._util import VALUE_INF, ConfigurationError, as_values, find_value, ilog2, min_value, use_threads
from .bbst_con import (BlockSparseTable, _answer_keyed, _answer_keyed_par, _answer_ranges,
                       _answer_ranges_par, _block_minima, _block_minima_par, block_shift,
                       table_from_block_minima)
from .core import Query, QueryBatch, position_dtype
from .timing import null_timer


@dataclass(frozen=True)
class LevelConfig:
    """Ascending block sizes forming a dividing chain; ``h = 1`` is plain BbST."""

    block_sizes: tuple

    def __post_init__(self):
        sizes = tuple(int(k) for k in self.block_sizes)
        if not sizes:
            raise ConfigurationError("at least one block size is required")
        if sizes[0] < 1:
            raise ConfigurationError(f"block sizes must be >= 1, got {sizes[0]}")
        for a, b in zip(sizes, sizes[1:]):
            if b <= a or b % a:
                raise ConfigurationError(f"block sizes must strictly increase and divide: {sizes}")
        object.__setattr__(self, "block_sizes", sizes)

    @classmethod
    def of(cls, spec: Union["LevelConfig", int, Sequence[int]]) -> "LevelConfig":
        if isinstance(spec, LevelConfig):
            return spec
        if isinstance(spec, (int, np.integer)):
            return cls((int(spec),))
        return cls(tuple(spec))

    @property
    def h(self) -> int:
        return len(self.block_sizes)

    @property
    def top(self) -> int:
        return self.block_sizes[-1]

    def __str__(self):
        return ",".join(map(str, self.block_sizes))


@dataclass(frozen=True, eq=False)
class MultiLevelTable:
    """Per-level block minima plus the doubling table over the top blocks.

    ``minima[offsets[i]:offsets[i + 1]]`` holds a minimum position for every
    ``k_{i+1}``-block of ``A`` (0-based level ``i``); the last level repeats
    ``top.entries[0]`` so the descent can treat all levels alike.
    """

    cfg: LevelConfig
    n: int
    minima: np.ndarray
    offsets: np.ndarray
    top: BlockSparseTable

    def level_minima(self, i: int) -> np.ndarray:
        return self.minima[self.offsets[i]:self.offsets[i + 1]]

    @property
    def extra_entries(self) -> int:
        """Stored minima below the top plus top-table cells."""
        return int(self.offsets[-2]) + self.top.cells


# -- construction ----------------------------------------------------------------

def _refine_impl(values, child, ratio, out):
    nc = child.size
    for j in prange(out.size):
        lo = j * ratio
        hi = min(nc, lo + ratio)
        best = child[lo]
        bv = values[best]
        for c in range(lo + 1, hi):
            p = child[c]
            v = values[p]
            if v < bv:
                bv = v
                best = p
        out[j] = best


_refine = njit(cache=True)(_refine_impl)
_refine_par = njit(parallel=True)(_refine_impl)


def build_multilevel(array, cfg, threads: int = 1, value_cache: bool = False) -> MultiLevelTable:
    """Build every level bottom-up; level ``i + 1`` comes from level ``i``'s minima."""
    cfg = LevelConfig.of(cfg)
    values = as_values(array)
    n = values.size
    if n == 0:
        raise ConfigurationError("cannot build block minima over an empty array")
    threads = use_threads(threads)
    pdt = position_dtype(n)
    counts = [-(-n // k) for k in cfg.block_sizes]
    offsets = np.zeros(cfg.h + 1, np.int64)
    offsets[1:] = np.cumsum(counts)
    minima = np.empty(int(offsets[-1]), pdt)
    first = minima[:counts[0]]
    (_block_minima_par if threads > 1 else _block_minima)(values, cfg.block_sizes[0], first)
    for i in range(1, cfg.h):
        child = minima[offsets[i - 1]:offsets[i]]
        ratio = cfg.block_sizes[i] // cfg.block_sizes[i - 1]
        (_refine_par if threads > 1 else _refine)(values, child, ratio, minima[offsets[i]:offsets[i + 1]])
    top = table_from_block_minima(values, cfg.top, minima[offsets[-2]:].copy(), threads, value_cache)
    return MultiLevelTable(cfg=cfg, n=n, minima=minima, offsets=offsets, top=top)


# -- descent -----------------------------------------------------------------------

@njit(cache=True)
def _descend(values, minima, offsets, ks, lev, blk, lo, hi, bv, best):
    """Fold ``min(values[lo..hi])`` into ``(bv, best)``; the range lies in block ``blk`` of ``lev``.

    Returns ``(bv, best, reads, scanned)``: every cell of ``values`` touched,
    and the subset read by raw scans.  Each block minimum is tried before
    anything below it.  A range splits into whole children plus partial
    children at its edges; after the first two-sided split every partial
    range is a prefix or suffix of its block, so one pending range suffices.
    """
    reads = 0
    scanned = 0
    pending = False
    p_lev = p_blk = p_lo = p_hi = 0
    while True:
        p = minima[offsets[lev] + blk]
        v = np.int64(values[p])
        reads += 1
        go = False
        if lo <= p and p <= hi:
            if v < bv:
                bv = v
                best = p
        elif v < bv:
            if lev == 0:
                sv = np.int64(min_value(values, lo, hi))
                reads += hi - lo + 1
                scanned += hi - lo + 1
                if sv < bv:
                    bv = sv
                    best = find_value(values, lo, sv)
            else:
                c = ks[lev - 1]
                lc = lo // c
                rc = hi // c
                lev -= 1
                go = True
                if lc == rc:
                    blk = lc
                else:
                    cut_l = lo != lc * c
                    cut_r = hi != rc * c + c - 1
                    base = offsets[lev]
                    for j in range(lc + cut_l, rc + 1 - cut_r):
                        cp = minima[base + j]
                        cv = np.int64(values[cp])
                        reads += 1
                        if cv < bv:
                            bv = cv
                            best = cp
                    if cut_l and cut_r:
                        pending = True
                        p_lev, p_blk, p_lo, p_hi = lev, rc, rc * c, hi
                        blk, hi = lc, lc * c + c - 1
                    elif cut_l:
                        blk, hi = lc, lc * c + c - 1
                    elif cut_r:
                        blk, lo = rc, rc * c
                    else:
                        go = False
        if not go:
            if not pending:
                break
            pending = False
            lev, blk, lo, hi = p_lev, p_blk, p_lo, p_hi
    return bv, best, reads, scanned


def _answer_ml_impl(values, minima, offsets, ks, entries, left, right, out, counts):
    h = ks.size
    top = ks[h - 1]
    tlev = h - 1
    for i in prange(left.size):
        lo = left[i]
        hi = right[i]
        bl = lo // top
        br = hi // top
        r = 0
        s = 0
        if bl == br:
            bv, best, r, s = _descend(values, minima, offsets, ks, tlev, bl, lo, hi, VALUE_INF, -1)
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
                r += 2
            # speculative endpoint-block checks, descent only when they fail
            p = entries[0, bl]
            v = np.int64(values[p])
            r += 1
            inside = p >= lo
            take = inside & (v <= bv)
            best = p if take else best
            bv = v if take else bv
            if (not inside) & (v < bv):
                bv, best, rr, ss = _descend(values, minima, offsets, ks, tlev, bl, lo, bl * top + top - 1,
                                            bv, best)
                r += rr
                s += ss
            p = entries[0, br]
            v = np.int64(values[p])
            r += 1
            inside = p <= hi
            take = inside & (v < bv)
            best = p if take else best
            bv = v if take else bv
            if (not inside) & (v < bv):
                bv, best, rr, ss = _descend(values, minima, offsets, ks, tlev, br, br * top, hi, bv, best)
                r += rr
                s += ss
        out[i] = best
        if counts is not None:
            counts[i, 0] = r
            counts[i, 1] = s


_answer_ml = njit(cache=True)(_answer_ml_impl)
_answer_ml_par = njit(parallel=True)(_answer_ml_impl)


def _ks(cfg: LevelConfig) -> np.ndarray:
    return np.asarray(cfg.block_sizes, np.int64)


def answer_one_ml(tbl: MultiLevelTable, array, q: Query, stats: Optional[dict] = None) -> int:
    """One query through the descent.

    ``stats["reads"]`` accumulates every cell of ``A`` read (block minima
    included) and ``stats["scanned"]`` the cells read by raw scans.
    """
    values = as_values(array)
    if values.size != tbl.n:
        raise ConfigurationError(f"table built for n={tbl.n}, array has n={values.size}")
    if not (0 <= q.left <= q.right < tbl.n):
        raise IndexError(f"query ({q.left}, {q.right}) out of range for n={tbl.n}")
    counts = np.zeros((1, 2), np.int64)
    out = answer_batch_ml(tbl, values, QueryBatch.from_pairs([(q.left, q.right)]), counts=counts)
    if stats is not None:
        stats["reads"] = stats.get("reads", 0) + int(counts[0, 0])
        stats["scanned"] = stats.get("scanned", 0) + int(counts[0, 1])
    return int(out[0])


def answer_batch_ml(tbl: MultiLevelTable, array, batch: QueryBatch, threads: int = 1,
                    counts: Optional[np.ndarray] = None) -> np.ndarray:
    """Answer ``batch``; ``counts`` (shape ``(q, 2)``) receives reads and scanned cells."""
    values = as_values(array)
    out = np.empty(len(batch), np.int64)
    if len(batch) == 0:
        return out
    top = tbl.top
    if tbl.cfg.h == 1 and counts is None:
        # the single-level kernels are the tuned ones shared with BbST_CON
        ks = block_shift(top.k)
        if top.keys is None:
            kernel = _answer_ranges_par if threads > 1 else _answer_ranges
            kernel(values, top.entries, top.k, ks, batch.left, batch.right, batch.left, None, out, None)
        else:
            kernel = _answer_keyed_par if threads > 1 else _answer_keyed
            kernel(values, None, top.keys, top.k, ks, batch.left, batch.right, batch.left, batch.right,
                   out, None)
        return out
    kernel = _answer_ml_par if threads > 1 else _answer_ml
    kernel(values, tbl.minima, tbl.offsets, _ks(tbl.cfg), top.entries, batch.left, batch.right, out, counts)
    return out


def solve_batch_bbst(array, batch: QueryBatch, cfg=None, threads: int = 1, value_cache: bool = False,
                     timer=None) -> np.ndarray:
    """Build once over ``A`` and answer every query; ``cfg`` is a block size or chain.

    The default is one level with ``k`` near ``sqrt(n)``.
    """
    timer = timer or null_timer()
    values = as_values(array)
    batch.check_bounds(values.size)
    if len(batch) == 0:
        return np.empty(0, np.int64)
    cfg = LevelConfig.of(cfg if cfg is not None else suggest_block_sizes(values.size, 1))
    threads = use_threads(threads)
    with timer.stage("build"):
        tbl = build_multilevel(values, cfg, threads, value_cache)
    with timer.stage("answer"):
        out = answer_batch_ml(tbl, values, batch, threads)
    return out


def suggest_block_sizes(n: int, h: int = 1) -> LevelConfig:
    """Block sizes from the asymptotic rules, rounded to a power-of-two chain.

    ``h = 1`` gives ``sqrt(n)``.  For ``h >= 2``: ``k_1 = sqrt(n) / L**(1/(h+1))``
    and ``k_i = sqrt(n) * L**((i-1)/(h-1) - 1/(h+1))`` with ``L = log2 n``.
    Each size is rounded to the nearest power of two in log scale and bumped
    to keep the chain strictly increasing (powers of two always divide).
    """
    if n < 1 or h < 1:
        raise ConfigurationError("need n >= 1 and h >= 1")
    root = math.sqrt(n)
    if h == 1:
        raw = [root]
    else:
        lg = max(math.log2(n), 1.0)
        raw = [root / lg ** (1 / (h + 1))]
        raw += [root * lg ** ((i - 1) / (h - 1) - 1 / (h + 1)) for i in range(2, h + 1)]
    sizes = []
    for k in raw:
        e = max(0, round(math.log2(max(k, 1.0))))
        if sizes and (1 << e) <= sizes[-1]:
            e = sizes[-1].bit_length()
        sizes.append(1 << e)
    return LevelConfig(tuple(sizes))
