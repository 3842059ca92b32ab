"""Share of each stage in the contracted pipeline as q grows.

Sorting is negligible for few queries and dominates for many.

    python demos/04_stage_breakdown.py [--n 10000000]
"""
import argparse
import math

from batchrmq.bench import WorkloadSpec, gen_permutation, gen_queries, run_benchmark

ap = argparse.ArgumentParser()
ap.add_argument("--n", type=int, default=10**7)
ap.add_argument("--runs", type=int, default=3)
args = ap.parse_args()

A = gen_permutation(args.n, 3)
root = math.isqrt(args.n)
print(f"{'q':>12}" + "".join(f"{s:>9}" for s in ("sort", "contract", "build", "answer")) + f" {'total ms':>9}")
for mult in (1, 32, 1024):
    q = mult * root
    rec = run_benchmark(WorkloadSpec(n=args.n, q=q, algo="bbst-con", runs=args.runs), A, gen_queries(args.n, q, 4))
    shares = "".join(f"{100 * rec.stage_share(s):>8.1f}%" for s in ("sort", "contract", "build", "answer"))
    print(f"{q:>12,}{shares} {rec.t_total_ns / 1e6:>9.1f}")
