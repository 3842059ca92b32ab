"""Time the contracted variants against the baseline over q = sqrt(n) .. 1024 sqrt(n).

Writes sweep.csv and sweep.svg into the output directory (default: demo_output).

    python demos/03_query_sweep.py [--n 1000000] [--runs 3] [--out demo_output]
"""
import argparse
import os

from batchrmq.bench import WorkloadSpec, emit_csv, emit_plot, gen_permutation, gen_queries, run_benchmark
from batchrmq.bench.harness import sqrt_sweep

ap = argparse.ArgumentParser()
ap.add_argument("--n", type=int, default=10**6)
ap.add_argument("--runs", type=int, default=3)
ap.add_argument("--out", default="demo_output")
args = ap.parse_args()
os.makedirs(args.out, exist_ok=True)

A = gen_permutation(args.n, 7)
configs = [("st-rmq-con", {}), ("bbst-con", {"k": 512}), ("bbst", {"k": 4096}), ("bbst-ml", {"chain": (256, 4096)})]
records = []
for q in sqrt_sweep(args.n, range(0, 11, 2)):
    batch = gen_queries(args.n, q, 8)
    line = [f"q={q:>9,}"]
    for algo, kw in configs:
        rec = run_benchmark(WorkloadSpec(n=args.n, q=q, algo=algo, runs=args.runs, **kw), A, batch)
        records.append(rec)
        line.append(f"{algo} {rec.t_total_ns / 1e6:8.2f} ms")
    print("  ".join(line))

emit_csv(records, os.path.join(args.out, "sweep.csv"))
emit_plot(records, os.path.join(args.out, "sweep.svg"))
print("wrote", os.path.join(args.out, "sweep.csv"), "and sweep.svg")
