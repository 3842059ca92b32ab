"""Byte model of the extra space each algorithm allocates beyond ``A``.

Block sparse tables are charged 8 bytes per cell, a table over ``m``
elements with block size ``k`` having ``b * (floor(log2 b) + 1)`` cells for
``b = ceil(m / k)``.  The contracted variant also pays 20 bytes per query
endpoint (8 for the sorted endpoint, 4 for the contracted value, 8 for the
mapping back into ``A``) with ``|A_Q|`` taken as ``2q``.
"""
import math


def table_cells(m: int, k: int) -> int:
    """Cells of a block sparse table over ``m`` elements with blocks of ``k``."""
    if m <= 0:
        return 0
    b = -(-m // k)
    return b * b.bit_length()


def _element_table_bytes(m: int) -> int:
    # int32 positions, one row per power of two
    return 4 * m * m.bit_length() if m > 0 else 0


def account_memory(spec) -> int:
    """Modeled extra bytes for ``spec`` (a :class:`~batchrmq.bench.WorkloadSpec`)."""
    algo, n, q = spec.algo, spec.n, spec.q
    if algo == "naive":
        return 0
    if algo == "sparse":
        return _element_table_bytes(n)
    if algo == "st-rmq-con":
        # mark bits, the n-entry endpoint index map, A_Q values and origins, and its table
        m = min(n, 4 * q + 1) if q else 0
        return math.ceil(n / 64) * 8 + 4 * n + 8 * m + _element_table_bytes(m)
    sizes = spec.block_sizes
    if algo == "bbst-con":
        return 20 * 2 * q + 8 * table_cells(2 * q, sizes[-1]) if q else 0
    if algo in ("bbst", "bbst-ml"):
        below = sum(-(-n // k) for k in sizes[:-1])
        return 8 * below + 8 * table_cells(n, sizes[-1])
    raise ValueError(f"unknown algorithm {algo!r}")
