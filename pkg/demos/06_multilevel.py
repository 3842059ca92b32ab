"""Single-level versus multi-level block tables straight on A.

An extra level of small-block minima cuts the cost of the rare endpoint
fallbacks, which lets the top block size grow without paying for scans.

    python demos/06_multilevel.py [--n 10000000]
"""
import argparse
import math

import numpy as np

from batchrmq.bench import WorkloadSpec, gen_permutation, gen_queries, run_benchmark
from batchrmq.multilevel import answer_batch_ml, build_multilevel, suggest_block_sizes

ap = argparse.ArgumentParser()
ap.add_argument("--n", type=int, default=10**7)
ap.add_argument("--runs", type=int, default=3)
args = ap.parse_args()

A = gen_permutation(args.n, 5)
q = 64 * math.isqrt(args.n)
batch = gen_queries(args.n, q, 6)
print(f"n = {args.n:,}, q = {q:,}")
chains = [(4096,), (16384,), (65536,), (512, 16384), (1024, 65536), tuple(suggest_block_sizes(args.n, 2).block_sizes),
          tuple(suggest_block_sizes(args.n, 3).block_sizes)]
for chain in chains:
    algo = "bbst" if len(chain) == 1 else "bbst-ml"
    kw = {"k": chain[0]} if algo == "bbst" else {"chain": chain}
    rec = run_benchmark(WorkloadSpec(n=args.n, q=q, algo=algo, runs=args.runs, **kw), A, batch)
    counts = np.zeros((q, 2), np.int64)
    answer_batch_ml(build_multilevel(A, chain), A, batch, counts=counts)
    print(f"{','.join(map(str, chain)):>16}: {rec.t_total_ns / 1e6:8.1f} ms, mean reads {counts[:, 0].mean():7.1f}, "
          f"max reads {counts[:, 0].max():6d}, extra {rec.extra_pct:.2f}%")
