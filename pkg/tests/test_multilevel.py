import numpy as np
import pytest

from batchrmq._util import ConfigurationError
from batchrmq.core import Query, QueryBatch, build_element_sparse_table
from batchrmq.multilevel import (LevelConfig, answer_batch_ml, answer_one_ml, build_multilevel, solve_batch_bbst,
                                 suggest_block_sizes)

from conftest import assert_valid_answers, oracle_values, random_batch


def test_level_config_validation():
    assert LevelConfig.of([2, 4, 16]).h == 3
    assert LevelConfig.of(8).block_sizes == (8,)
    for bad in ([], [4, 6], [4, 4], [8, 4], [0]):
        with pytest.raises(ConfigurationError):
            LevelConfig.of(bad)


def test_build_examples(worked):
    t = build_multilevel(worked, [2])
    assert t.top.entries[0].tolist() == [1, 3, 5, 7]
    assert t.top.entries[1, 0] == 3
    t = build_multilevel(worked, [2, 4])
    assert t.level_minima(0).tolist() == [1, 3, 5, 7]
    assert t.level_minima(1).tolist() == [3, 7]
    assert answer_one_ml(t, worked, Query(0, 7)) == 7
    assert answer_one_ml(t, worked, Query(5, 5)) == 5
    t = build_multilevel(worked, [1])
    st = build_element_sparse_table(worked)
    np.testing.assert_array_equal(t.top.entries[0], st.table[0])


def test_k1_matches_element_table(rng):
    values = rng.integers(0, 100, 500).astype(np.int32)
    batch = random_batch(rng, 500, 2000)
    out = solve_batch_bbst(values, batch, [1])
    np.testing.assert_array_equal(values[out], oracle_values(values, batch))


def test_refinement_invariant_exhaustive(rng):
    for n in range(1, 80):
        values = rng.integers(0, 10, n).astype(np.int32)
        for cfg in ([1, 2], [2, 4, 8], [3, 6], [2, 6, 12]):
            t = build_multilevel(values, cfg)
            for i, k in enumerate(t.cfg.block_sizes):
                mins = t.level_minima(i)
                assert mins.size == -(-n // k)
                for j, p in enumerate(mins):
                    assert j * k <= p < min(n, (j + 1) * k)
                    assert values[p] == values[j * k:(j + 1) * k].min()
                if i:
                    ratio = k // t.cfg.block_sizes[i - 1]
                    child = t.level_minima(i - 1)
                    for j, p in enumerate(mins):
                        assert values[p] == values[child[j * ratio:(j + 1) * ratio]].min()


def test_solve_examples(worked, rng):
    out = solve_batch_bbst(worked, QueryBatch.from_pairs([(1, 4), (3, 6)]), [2])
    assert worked[out].tolist() == [2, 2]
    assert solve_batch_bbst(worked, QueryBatch.empty(), [2]).size == 0
    n = 10**5
    values = rng.integers(0, 10**9, n).astype(np.int32)
    batch = random_batch(rng, n, 10**4)
    assert_valid_answers(values, batch, solve_batch_bbst(values, batch, [316]))
    a = solve_batch_bbst(values, batch, [4096])
    b = solve_batch_bbst(values, batch, [64, 4096])
    np.testing.assert_array_equal(values[a], values[b])


def _random_chain(rng, h):
    ks = [int(rng.integers(1, 9))]
    for _ in range(h - 1):
        ks.append(ks[-1] * int(rng.integers(2, 6)))
    return ks


@pytest.mark.parametrize("h", [1, 2, 3])
@pytest.mark.parametrize("value_cache", [False, True])
def test_oracle_random_chains(rng, h, value_cache):
    for _ in range(6):
        n = int(rng.integers(1, 100_000))
        values = rng.integers(0, int(rng.choice([5, 10**9])), n).astype(np.int32)
        batch = random_batch(rng, n, 2000)
        cfg = _random_chain(rng, h)
        assert_valid_answers(values, batch, solve_batch_bbst(values, batch, cfg, value_cache=value_cache))
        counts = np.zeros((len(batch), 2), np.int64)
        out = answer_batch_ml(build_multilevel(values, cfg), values, batch, counts=counts)
        assert_valid_answers(values, batch, out)


@pytest.mark.parametrize("cfg", [[16], [8, 64], [4, 16, 128], [2, 8, 32, 256]])
def test_read_bound(rng, cfg):
    n = 50_000
    values = rng.integers(0, 10**9, n).astype(np.int32)
    # adversarial-ish: short and mid-length queries that stay inside and straddle blocks
    lo = rng.integers(0, n - 1, 4000)
    hi = np.minimum(n - 1, lo + rng.integers(0, 3 * cfg[-1], 4000))
    batch = QueryBatch(lo, hi)
    tbl = build_multilevel(values, cfg)
    counts = np.zeros((len(batch), 2), np.int64)
    answer_batch_ml(tbl, values, batch, counts=counts)
    bound = 2 * cfg[0] + 2 * sum(b // a for a, b in zip(cfg, cfg[1:]))
    slack = 3 + 2 * len(cfg)
    assert counts[:, 0].max() <= bound + slack


def test_query_inside_one_k1_block(rng):
    values = rng.integers(0, 1000, 1024).astype(np.int32)
    t = build_multilevel(values, [16, 64, 256])
    for lo in range(0, 1024, 37):
        base = lo - lo % 16
        hi = min(base + 15, lo + int(rng.integers(0, 16)))
        stats = {}
        p = answer_one_ml(t, values, Query(lo, hi), stats)
        assert values[p] == values[lo:hi + 1].min()
        assert stats["scanned"] <= 16


def test_answer_one_errors(worked):
    t = build_multilevel(worked, [2])
    with pytest.raises(IndexError):
        answer_one_ml(t, worked, Query(0, 8))
    with pytest.raises(ConfigurationError):
        answer_one_ml(t, worked[:4], Query(0, 1))
    with pytest.raises(ConfigurationError):
        build_multilevel(np.empty(0, np.int32), [2])


def test_suggest_block_sizes():
    assert suggest_block_sizes(10**6, 1).block_sizes == (1024,)
    for n in (10**5, 10**7, 10**9):
        for h in (2, 3, 4):
            cfg = suggest_block_sizes(n, h)
            assert cfg.h == h
            assert all(k & (k - 1) == 0 for k in cfg.block_sizes)
    # k_1 sits below sqrt(n) and k_h above it
    cfg = suggest_block_sizes(10**7, 2)
    assert cfg.block_sizes[0] < 10**3.5 < cfg.block_sizes[-1]


def test_extra_entries_single_level():
    n, k = 10**6, 4096
    t = build_multilevel(np.zeros(n, np.int32), [k])
    b = -(-n // k)
    assert t.extra_entries == b * (int(b).bit_length())
