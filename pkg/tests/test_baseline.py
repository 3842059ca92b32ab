import numpy as np

from batchrmq.baseline import contract_marked, solve_batch_st_rmq_con
from batchrmq.core import QueryBatch

from conftest import assert_valid_answers, random_batch


def test_contract_marked_examples(worked):
    mc = contract_marked(worked, QueryBatch.from_pairs([(1, 4), (3, 6)]))
    assert [p for p in range(8) if mc.is_marked(p)] == [1, 3, 4, 6]
    assert mc.aq_values.tolist() == worked.tolist()
    assert len(mc) <= 4 * 2 + 1
    mc = contract_marked(worked, QueryBatch.from_pairs([(0, 7)]))
    assert [p for p in range(8) if mc.is_marked(p)] == [0, 7]
    assert mc.aq_values.tolist() == [5, 2, 1]
    assert mc.aq_origin.tolist() == [0, 3, 7]
    mc = contract_marked(worked, QueryBatch.empty())
    assert mc.aq_values.tolist() == [1]


def test_marked_positions_copied_verbatim(rng):
    n = 5000
    values = rng.integers(0, 50, n).astype(np.int32)
    batch = random_batch(rng, n, 400)
    mc = contract_marked(values, batch)
    assert len(mc) <= 4 * len(batch) + 1
    marked = np.union1d(batch.left, batch.right)
    np.testing.assert_array_equal(mc.aq_origin[mc.index_of[marked]], marked)
    assert np.all(np.diff(mc.aq_origin) > 0)
    # each unmarked run becomes its minimum
    edges = np.concatenate(([-1], marked, [n]))
    runs = [(a + 1, b - 1) for a, b in zip(edges[:-1], edges[1:]) if b - a > 1]
    assert len(mc) == marked.size + len(runs)


def test_solve_examples(worked, rng):
    out = solve_batch_st_rmq_con(worked, QueryBatch.from_pairs([(1, 4), (3, 6)]))
    assert worked[out].tolist() == [2, 2]
    assert solve_batch_st_rmq_con(worked, QueryBatch.empty()).size == 0
    n = 100_000
    values = rng.integers(0, 10**9, n).astype(np.int32)
    batch = random_batch(rng, n, 1000)
    assert_valid_answers(values, batch, solve_batch_st_rmq_con(values, batch))
    out = solve_batch_st_rmq_con(values, QueryBatch([0], [n - 1]))
    assert values[out[0]] == values.min()
