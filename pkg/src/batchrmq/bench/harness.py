"""Median-of-R benchmark runs with per-stage timing."""
import math
import time
from dataclasses import dataclass, field
from typing import Optional, Tuple

import numpy as np
from numba import njit

from .._util import ConfigurationError, as_values
from ..baseline import solve_batch_st_rmq_con
from ..bbst_con import DEFAULT_K, BbstConParams, solve_batch_bbst_con
from ..core import QueryBatch, solve_batch_naive, solve_batch_sparse
from ..multilevel import LevelConfig, solve_batch_bbst, suggest_block_sizes
from ..sorting import SORT_KINDS
from ..timing import STAGES, StageTimer
from .memory import account_memory
from .workload import gen_permutation, gen_queries

ALGORITHMS = ("naive", "sparse", "st-rmq-con", "bbst-con", "bbst", "bbst-ml")
_BLOCKED = ("bbst-con", "bbst", "bbst-ml")
DEFAULT_BBST_K = 16384
FLUSH_BYTES = 64 << 20

FNV_OFFSET = 0xCBF29CE484222325
FNV_PRIME = 0x100000001B3


@dataclass(frozen=True)
class WorkloadSpec:
    """One benchmark configuration; ``seed`` may be ``None`` for data loaded from files."""

    n: int
    q: int
    algo: str
    seed: Optional[int] = 0
    k: Optional[int] = None
    chain: Optional[Tuple[int, ...]] = None
    runs: int = 7
    threads: int = 1
    sort: str = "radix"
    value_cache: bool = False

    def __post_init__(self):
        if self.n < 1:
            raise ConfigurationError("n must be >= 1")
        if self.q < 0:
            raise ConfigurationError("q must be >= 0")
        if self.runs < 1 or self.runs % 2 == 0:
            raise ConfigurationError(f"runs must be odd and >= 1, got {self.runs}")
        if self.threads < 1:
            raise ConfigurationError("threads must be >= 1")
        if self.algo not in ALGORITHMS:
            raise ConfigurationError(f"unknown algorithm {self.algo!r}; expected one of {ALGORITHMS}")
        if self.sort not in SORT_KINDS:
            raise ConfigurationError(f"unknown sort kind {self.sort!r}")
        if self.k is not None and self.chain is not None:
            raise ConfigurationError("give either k or chain, not both")
        if self.algo not in _BLOCKED:
            if self.k is not None or self.chain is not None:
                raise ConfigurationError(f"{self.algo} takes no block size")
            if self.threads != 1:
                raise ConfigurationError(f"{self.algo} is single-threaded")
        if self.chain is not None:
            if self.algo != "bbst-ml":
                raise ConfigurationError("a block-size chain needs algo bbst-ml")
            object.__setattr__(self, "chain", LevelConfig(tuple(self.chain)).block_sizes)
        if self.k is not None:
            if self.algo == "bbst-ml":
                raise ConfigurationError("bbst-ml takes --chain, not --k")
            if self.k < 1:
                raise ConfigurationError("k must be >= 1")
        if self.sort != "radix" and self.algo != "bbst-con":
            raise ConfigurationError("the sort kind only applies to bbst-con")

    @property
    def block_sizes(self) -> Tuple[int, ...]:
        """Resolved block sizes; empty for algorithms without blocks."""
        if self.algo == "bbst-con":
            return (self.k or DEFAULT_K,)
        if self.algo == "bbst":
            return (self.k or DEFAULT_BBST_K,)
        if self.algo == "bbst-ml":
            return self.chain or suggest_block_sizes(self.n, 2).block_sizes
        return ()

    @property
    def k_chain(self) -> str:
        return ",".join(map(str, self.block_sizes))


@dataclass(frozen=True)
class BenchRecord:
    spec: WorkloadSpec
    t_sort_ns: int
    t_contract_ns: int
    t_build_ns: int
    t_answer_ns: int
    t_total_ns: int
    extra_bytes: int
    extra_pct: float
    answers_checksum: int
    answers: Optional[np.ndarray] = field(default=None, repr=False, compare=False)

    def stage_share(self, stage: str) -> float:
        """Fraction of the total spent in ``stage``."""
        return getattr(self, f"t_{stage}_ns") / self.t_total_ns if self.t_total_ns else 0.0

    def row(self) -> dict:
        s = self.spec
        return {
            "algo": s.algo, "n": s.n, "q": s.q, "k_chain": s.k_chain, "threads": s.threads,
            "runs": s.runs, "t_sort_ns": self.t_sort_ns, "t_contract_ns": self.t_contract_ns,
            "t_build_ns": self.t_build_ns, "t_answer_ns": self.t_answer_ns,
            "t_total_ns": self.t_total_ns, "extra_bytes": self.extra_bytes,
            "extra_pct": f"{self.extra_pct:.6f}", "answers_checksum": self.answers_checksum,
        }


def solve(spec: WorkloadSpec, values: np.ndarray, batch: QueryBatch, timer=None) -> np.ndarray:
    """Run the algorithm ``spec`` selects once; answers are positions in batch order."""
    algo = spec.algo
    if algo == "naive":
        return solve_batch_naive(values, batch, timer)
    if algo == "sparse":
        return solve_batch_sparse(values, batch, timer)
    if algo == "st-rmq-con":
        return solve_batch_st_rmq_con(values, batch, timer)
    if algo == "bbst-con":
        params = BbstConParams(k=spec.block_sizes[0], sort_kind=spec.sort, thread_count=spec.threads,
                               value_cache=spec.value_cache)
        return solve_batch_bbst_con(values, batch, params, timer)
    return solve_batch_bbst(values, batch, LevelConfig(spec.block_sizes), spec.threads, spec.value_cache,
                            timer)


@njit(cache=True)
def _fnv1a(vals):
    h = np.uint64(FNV_OFFSET)
    prime = np.uint64(FNV_PRIME)
    for i in range(vals.size):
        x = np.uint64(np.int64(vals[i]))
        for _ in range(8):
            h ^= x & np.uint64(0xFF)
            h *= prime
            x >>= np.uint64(8)
    return h


def answers_checksum(values, answers) -> int:
    """FNV-1a 64 over the little-endian int64 bytes of ``values[answers]``.

    Folding values rather than positions makes algorithms that break ties
    differently agree.
    """
    vals = np.asarray(values)[np.asarray(answers, dtype=np.int64)]
    return int(_fnv1a(np.ascontiguousarray(vals, dtype=np.int64)))


def _warm_up(spec: WorkloadSpec):
    # compile every kernel the run will touch on an instance too small to matter
    n = min(spec.n, 4096)
    tiny = WorkloadSpec(n=n, q=min(spec.q, 64), algo=spec.algo, seed=1, k=spec.k, chain=spec.chain,
                        runs=1, threads=spec.threads, sort=spec.sort, value_cache=spec.value_cache)
    solve(tiny, gen_permutation(n, 1), gen_queries(n, tiny.q, 2), StageTimer())


_flush_buffer = None


def flush_cache():
    """Stream a write over a 64 MiB buffer so no run starts with a warm cache."""
    global _flush_buffer
    if _flush_buffer is None:
        _flush_buffer = np.empty(FLUSH_BYTES, np.uint8)
    _flush_buffer.fill(_flush_buffer[0] + 1)


def run_benchmark(spec: WorkloadSpec, array=None, batch: Optional[QueryBatch] = None,
                  flush: bool = True, keep_answers: bool = False) -> BenchRecord:
    """Median-of-``spec.runs`` timing; data are generated from ``spec.seed`` unless given.

    Generation, JIT compilation and the checksum stay outside the timed regions.
    """
    if array is None:
        if spec.seed is None:
            raise ConfigurationError("a seed is required to generate data")
        array = gen_permutation(spec.n, spec.seed)
    values = as_values(array)
    if batch is None:
        if spec.seed is None:
            raise ConfigurationError("a seed is required to generate data")
        batch = gen_queries(spec.n, spec.q, spec.seed + 1)
    if values.size != spec.n or len(batch) != spec.q:
        raise ConfigurationError(f"spec says n={spec.n}, q={spec.q}; data have n={values.size}, q={len(batch)}")
    batch.check_bounds(values.size)
    _warm_up(spec)
    stages = {s: [] for s in STAGES}
    totals = []
    answers = None
    for _ in range(spec.runs):
        if flush:
            flush_cache()
        timer = StageTimer()
        t0 = time.perf_counter_ns()
        answers = solve(spec, values, batch, timer)
        totals.append(time.perf_counter_ns() - t0)
        for s in STAGES:
            stages[s].append(timer.ns[s])
    med = {s: int(np.median(v)) for s, v in stages.items()}
    extra = account_memory(spec)
    return BenchRecord(
        spec=spec, t_sort_ns=med["sort"], t_contract_ns=med["contract"], t_build_ns=med["build"],
        t_answer_ns=med["answer"], t_total_ns=int(np.median(totals)), extra_bytes=extra,
        extra_pct=extra / (4 * spec.n) * 100, answers_checksum=answers_checksum(values, answers),
        answers=answers if keep_answers else None,
    )


def sqrt_sweep(n: int, steps=range(11)):
    """Query counts ``sqrt(n) * 2**t``; the default spans ``sqrt(n) .. 1024 sqrt(n)``."""
    root = math.isqrt(n)
    return [root << t for t in steps]
