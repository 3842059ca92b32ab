"""Radix sorting of endpoint keys.

Keys are unsigned integers whose sort key occupies bits
``shift0 .. shift0 + nbits``; everything below ``shift0`` is satellite data
that travels with the key.  Bare positions use ``shift0 = 0`` and packed
``(position << 32) | origin`` pairs use ``shift0 = 32``.

The sort is MSD on the top digit (one pass over main memory) followed by an
LSD sort of each bucket, which by then is small enough to stay in cache.
Buckets are independent, so both phases split across threads.
"""
import numpy as np
from numba import njit, prange

from ._util import ConfigurationError

SORT_KINDS = ("radix", "comparison")
TOP_BITS = 8
LOW_DIGIT_BITS = 8
_INSERTION_CUTOFF = 32


@njit(cache=True, inline="always")
def _insertion(a, lo, hi, shift0):
    sh = np.uint64(shift0)
    for i in range(lo + 1, hi):
        v = a[i]
        kv = np.uint64(v) >> sh
        j = i - 1
        while j >= lo and (np.uint64(a[j]) >> sh) > kv:
            a[j + 1] = a[j]
            j -= 1
        a[j + 1] = v


@njit(cache=True)
def _lsd_range(a, tmp, lo, hi, shift0, bits):
    # sorts a[lo:hi] by bits shift0 .. shift0 + bits, using tmp[lo:hi]
    if hi - lo < 2 or bits <= 0:
        return
    if hi - lo <= _INSERTION_CUTOFF:
        _insertion(a, lo, hi, shift0)
        return
    passes = (bits + LOW_DIGIT_BITS - 1) // LOW_DIGIT_BITS
    width = (bits + passes - 1) // passes
    nb = 1 << width
    mask = np.uint64(nb - 1)
    count = np.empty(nb, np.int64)
    src = a
    dst = tmp
    for p in range(passes):
        sh = np.uint64(shift0 + p * width)
        count[:] = 0
        for i in range(lo, hi):
            count[np.intp((np.uint64(src[i]) >> sh) & mask)] += 1
        total = lo
        for d in range(nb):
            c = count[d]
            count[d] = total
            total += c
        for i in range(lo, hi):
            v = src[i]
            d = np.intp((np.uint64(v) >> sh) & mask)
            dst[count[d]] = v
            count[d] += 1
        src, dst = dst, src
    if passes & 1:
        for i in range(lo, hi):
            a[i] = tmp[i]


def _radix_impl(keys, out, shift0, nbits, nchunks):
    n = keys.size
    w1 = min(nbits, TOP_BITS)
    low = nbits - w1
    nb1 = 1 << w1
    sh1 = np.uint64(shift0 + low)
    mask1 = np.uint64(nb1 - 1)
    chunk = (n + nchunks - 1) // nchunks
    counts = np.zeros((nchunks, nb1), np.int64)
    for c in prange(nchunks):
        row = counts[c]
        for i in range(c * chunk, min(n, (c + 1) * chunk)):
            row[np.intp((np.uint64(keys[i]) >> sh1) & mask1)] += 1
    bucket_start = np.empty(nb1 + 1, np.int64)
    total = 0
    for d in range(nb1):
        bucket_start[d] = total
        for c in range(nchunks):
            t = counts[c, d]
            counts[c, d] = total
            total += t
    bucket_start[nb1] = total
    for c in prange(nchunks):
        row = counts[c]
        for i in range(c * chunk, min(n, (c + 1) * chunk)):
            v = keys[i]
            d = np.intp((np.uint64(v) >> sh1) & mask1)
            out[row[d]] = v
            row[d] += 1
    if low > 0:
        for d in prange(nb1):
            _lsd_range(out, keys, bucket_start[d], bucket_start[d + 1], shift0, low)


_radix = njit(cache=True)(_radix_impl)
_radix_par = njit(parallel=True)(_radix_impl)


def radix_sort(keys: np.ndarray, nbits: int, shift0: int = 0, threads: int = 1) -> np.ndarray:
    """Return ``keys`` sorted by bits ``shift0 .. shift0 + nbits``.

    ``keys`` is used as scratch space and is left in an unspecified order.
    """
    if keys.size < 2 or nbits <= 0:
        return keys
    out = np.empty_like(keys)
    if threads > 1:
        _radix_par(keys, out, shift0, nbits, threads)
    else:
        _radix(keys, out, shift0, nbits, 1)
    return out


def sort_keys(keys: np.ndarray, kind: str = "radix", threads: int = 1, max_key=None,
              shift0: int = 0) -> np.ndarray:
    """Sort unsigned keys by the bits from ``shift0`` upwards, consuming ``keys``.

    ``max_key`` (the largest sort key, i.e. already shifted down) bounds the
    number of radix digits; it is computed when omitted.
    """
    if kind not in SORT_KINDS:
        raise ConfigurationError(f"unknown sort kind {kind!r}; expected one of {SORT_KINDS}")
    if keys.size < 2:
        return keys
    if kind == "comparison":
        keys.sort(kind="quicksort")
        return keys
    if max_key is None:
        max_key = int(keys.max()) >> shift0
    return radix_sort(keys, int(max_key).bit_length(), shift0, threads)
