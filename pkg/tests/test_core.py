import numpy as np
import pytest

from batchrmq._util import ConfigurationError, EmptyInputError, InvariantError, floor_log2
from batchrmq.core import (Query, QueryBatch, build_element_sparse_table, element_st_rmq, naive_rmq,
                           solve_batch_naive, solve_batch_sparse)

from conftest import assert_valid_answers, random_batch


def test_naive_examples(worked):
    assert naive_rmq([7], Query(0, 0)) == 0
    assert naive_rmq(worked, Query(1, 4)) == 3
    assert naive_rmq([2, 2, 2], Query(0, 2)) == 0


def test_naive_errors(worked):
    with pytest.raises(IndexError):
        naive_rmq(worked, Query(3, 8))
    with pytest.raises(EmptyInputError):
        naive_rmq([], Query(0, 0))


def test_query_normalizes():
    q = Query(6, 3)
    assert (q.left, q.right) == (3, 6)
    b = QueryBatch([5, 1], [2, 4])
    np.testing.assert_array_equal(b.left, [2, 1])
    np.testing.assert_array_equal(b.right, [5, 4])
    with pytest.raises(IndexError):
        Query(-1, 2)


def test_sparse_table_examples(worked):
    t = build_element_sparse_table([2, 1])
    np.testing.assert_array_equal(t.table[0], [0, 1])
    assert t.table[1, 0] == 1
    assert build_element_sparse_table([5, 3, 8, 2]).table[2, 0] == 3
    t = build_element_sparse_table([1])
    assert t.levels == 1 and t.table.tolist() == [[0]]
    t = build_element_sparse_table(worked)
    assert element_st_rmq(t, worked, Query(0, 7)) == 7
    assert element_st_rmq(t, worked, Query(4, 4)) == 4
    assert element_st_rmq(build_element_sparse_table([5, 3, 8, 2]), [5, 3, 8, 2], Query(0, 3)) == 3


def test_sparse_table_errors(worked):
    with pytest.raises(EmptyInputError):
        build_element_sparse_table([])
    t = build_element_sparse_table(worked)
    with pytest.raises(InvariantError):
        element_st_rmq(t, worked[:4], Query(0, 1))


def test_floor_log2():
    assert [floor_log2(x) for x in (1, 2, 3, 4, 48829)] == [0, 1, 1, 2, 15]
    with pytest.raises(ValueError):
        floor_log2(0)


@pytest.mark.parametrize("n", [1, 2, 3, 17, 64, 1000, 4096])
def test_sparse_table_invariants(rng, n):
    values = rng.integers(0, 20, n).astype(np.int32)
    t = build_element_sparse_table(values)
    assert t.levels == floor_log2(n) + 1
    np.testing.assert_array_equal(t.table[0], np.arange(n))
    for i in range(1, t.levels):
        h = 1 << (i - 1)
        for j in range(n - (1 << i) + 1):
            a, b = t.table[i - 1, j], t.table[i - 1, j + h]
            assert t.table[i, j] == (a if values[a] <= values[b] else b)
    assert t.writes == n + sum(n - (1 << i) + 1 for i in range(1, t.levels))


def test_element_table_leftmost_matches_naive_all_pairs(rng):
    values = rng.integers(0, 5, 60).astype(np.int32)
    t = build_element_sparse_table(values)
    for l in range(60):
        for r in range(l, 60):
            assert element_st_rmq(t, values, Query(l, r)) == naive_rmq(values, Query(l, r))


def test_batch_oracles_leftmost(rng):
    values = rng.integers(0, 30, 4096).astype(np.int32)
    batch = random_batch(rng, 4096, 10_000)
    naive = solve_batch_naive(values, batch)
    np.testing.assert_array_equal(solve_batch_sparse(values, batch), naive)
    assert_valid_answers(values, batch, naive)
    t = build_element_sparse_table(values)
    for i in range(0, 10_000, 97):
        assert naive[i] == naive_rmq(values, batch[i]) == element_st_rmq(t, values, batch[i])


def test_empty_batches(worked):
    assert solve_batch_naive(worked, QueryBatch.empty()).size == 0
    assert solve_batch_sparse(worked, QueryBatch.empty()).size == 0


def test_values_must_fit_int32():
    with pytest.raises(ValueError):
        solve_batch_naive([2**31], QueryBatch([0], [0]))
    assert ConfigurationError.__mro__[1].__name__ == "RMQError"
