"""Little-endian binary files for arrays, query batches and answers.

Each file starts with a 4-byte magic, a one-byte version (1) and a u64
element count:

* ``RMQA``: ``n`` signed 32-bit values;
* ``RMQQ``: ``q`` pairs of u64 ``(left, right)``, 0-based inclusive;
* ``RMQR``: ``q`` u64 answer positions in query order.
"""
import os
import struct

import numpy as np

from ..core import QueryBatch

VERSION = 1
_HEADER = struct.Struct("<4sBQ")


class FormatError(ValueError):
    """Raised for a malformed or truncated data file."""


def _write(path, magic: bytes, count: int, payload: np.ndarray):
    with open(path, "wb") as f:
        f.write(_HEADER.pack(magic, VERSION, count))
        f.write(np.ascontiguousarray(payload).tobytes())


def _read(path, magic: bytes, dtype, width: int = 1) -> np.ndarray:
    with open(path, "rb") as f:
        head = f.read(_HEADER.size)
        if len(head) != _HEADER.size:
            raise FormatError(f"{os.fspath(path)}: truncated header")
        got, version, count = _HEADER.unpack(head)
        if got != magic:
            raise FormatError(f"{os.fspath(path)}: expected magic {magic!r}, found {got!r}")
        if version != VERSION:
            raise FormatError(f"{os.fspath(path)}: unsupported version {version}")
        dt = np.dtype(dtype)
        data = np.fromfile(f, dtype=dt, count=count * width)
    if data.size != count * width:
        raise FormatError(f"{os.fspath(path)}: expected {count * width} items, found {data.size}")
    return data


def write_array(path, values):
    values = np.asarray(values, dtype="<i4")
    _write(path, b"RMQA", values.size, values)


def read_array(path) -> np.ndarray:
    return _read(path, b"RMQA", "<i4").astype(np.int32, copy=False)


def write_queries(path, batch: QueryBatch):
    pairs = np.empty((len(batch), 2), "<u8")
    pairs[:, 0] = batch.left
    pairs[:, 1] = batch.right
    _write(path, b"RMQQ", len(batch), pairs)


def read_queries(path) -> QueryBatch:
    pairs = _read(path, b"RMQQ", "<u8", width=2).reshape(-1, 2)
    if pairs.size and pairs.max() >= 2**63:
        raise FormatError(f"{os.fspath(path)}: endpoint does not fit a signed 64-bit position")
    return QueryBatch(pairs[:, 0].astype(np.int64), pairs[:, 1].astype(np.int64))


def write_answers(path, positions):
    positions = np.asarray(positions, dtype=np.int64)
    if positions.size and positions.min() < 0:
        raise ValueError("answer positions must be non-negative")
    _write(path, b"RMQR", positions.size, positions.astype("<u8"))


def read_answers(path) -> np.ndarray:
    return _read(path, b"RMQR", "<u8").astype(np.int64)
