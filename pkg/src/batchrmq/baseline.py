"""ST-RMQ_CON: contraction by marking, then a per-element sparse table.

Every query endpoint is marked in a separate bit array (the values of
``A`` are left untouched).  One pass over ``A`` copies marked cells into
``A_Q`` verbatim and replaces each maximal unmarked run by its minimum, so
``|A_Q| <= 4q + 1``.  A plain O(|A_Q| log |A_Q|) sparse table over ``A_Q``
answers the remapped queries with two lookups each.
"""
from dataclasses import dataclass

import numpy as np
from numba import njit, prange

from ._util import as_values, ilog2
from .core import QueryBatch, build_element_sparse_table, position_dtype
from .timing import null_timer

_ONE = np.uint64(1)


@dataclass(frozen=True, eq=False)
class MarkedContraction:
    """Contracted array with marked endpoints kept verbatim.

    ``index_of[p]`` is meaningful only for marked positions ``p``.
    """

    mark: np.ndarray
    aq_values: np.ndarray
    aq_origin: np.ndarray
    index_of: np.ndarray

    def __len__(self):
        return self.aq_values.size

    def is_marked(self, p: int) -> bool:
        return bool((int(self.mark[p >> 6]) >> (p & 63)) & 1)

    @property
    def nbytes(self) -> int:
        return self.mark.nbytes + self.aq_values.nbytes + self.aq_origin.nbytes + self.index_of.nbytes


@njit(cache=True)
def _mark(left, right, words):
    for i in range(left.size):
        p = left[i]
        words[p >> 6] |= _ONE << np.uint64(p & 63)
        p = right[i]
        words[p >> 6] |= _ONE << np.uint64(p & 63)


@njit(cache=True)
def _contract_pass(values, words, aq_values, aq_origin, index_of):
    n = values.size
    t = 0
    in_run = False
    rv = values[0]
    rp = 0
    for w in range(words.size):
        word = words[w]
        base = w * 64
        top = min(n, base + 64)
        if word == 0:
            # whole word belongs to an unmarked run
            start = base
            if not in_run:
                in_run = True
                rv = values[base]
                rp = base
                start = base + 1
            for i in range(start, top):
                v = values[i]
                if v < rv:
                    rv = v
                    rp = i
            continue
        for i in range(base, top):
            if (word >> np.uint64(i - base)) & _ONE:
                if in_run:
                    aq_values[t] = rv
                    aq_origin[t] = rp
                    t += 1
                    in_run = False
                aq_values[t] = values[i]
                aq_origin[t] = i
                index_of[i] = t
                t += 1
            elif not in_run:
                in_run = True
                rv = values[i]
                rp = i
            elif values[i] < rv:
                rv = values[i]
                rp = i
    if in_run:
        aq_values[t] = rv
        aq_origin[t] = rp
        t += 1
    return t


def contract_marked(array, batch: QueryBatch) -> MarkedContraction:
    values = as_values(array)
    n = values.size
    batch.check_bounds(n)
    q = len(batch)
    words = np.zeros(-(-n // 64), np.uint64)
    if q:
        _mark(batch.left, batch.right, words)
    cap = min(n, 4 * q + 1)
    aq_values = np.empty(cap, np.int32)
    aq_origin = np.empty(cap, position_dtype(n))
    index_of = np.empty(n, position_dtype(cap + 1))
    m = _contract_pass(values, words, aq_values, aq_origin, index_of) if n else 0
    return MarkedContraction(words, aq_values[:m], aq_origin[:m], index_of)


def _answer_impl(aq_values, table, aq_origin, index_of, left, right, out):
    for i in prange(left.size):
        lo = index_of[left[i]]
        hi = index_of[right[i]]
        p = lo
        if hi > lo:
            e = ilog2(hi - lo)
            a = table[e, lo]
            b = table[e, hi - (1 << e) + 1]
            p = a if aq_values[a] <= aq_values[b] else b
        out[i] = aq_origin[p]


_answer = njit(cache=True)(_answer_impl)


def solve_batch_st_rmq_con(array, batch: QueryBatch, timer=None) -> np.ndarray:
    timer = timer or null_timer()
    values = as_values(array)
    batch.check_bounds(values.size)
    out = np.empty(len(batch), np.int64)
    if len(batch) == 0:
        return out
    with timer.stage("contract"):
        mc = contract_marked(values, batch)
    with timer.stage("build"):
        st = build_element_sparse_table(mc.aq_values)
    with timer.stage("answer"):
        _answer(mc.aq_values, st.table, mc.aq_origin, mc.index_of, batch.left, batch.right, out)
    return out
