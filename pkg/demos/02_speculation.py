"""How often does the speculative endpoint check fall back to scanning?

The fraction grows roughly linearly with k and shrinks as q grows.

    python demos/02_speculation.py
"""
import numpy as np

from batchrmq.bbst_con import BbstConParams, solve_batch_bbst_con
from batchrmq.bench import gen_permutation, gen_queries

n = 10**6
A = gen_permutation(n, 1)
print(f"n = {n:,}")
print(f"{'q':>9} {'k':>6} {'scan rate':>10} {'k/q':>9} {'cells/scan':>11}")
for q in (10**4, 10**5, 10**6):
    batch = gen_queries(n, q, 2)
    for k in (16, 64, 256, 1024):
        _, scans = solve_batch_bbst_con(A, batch, BbstConParams(k=k), return_scans=True)
        hit = scans > 0
        per = scans[hit].mean() if hit.any() else 0.0
        print(f"{q:>9,} {k:>6} {hit.mean():>10.4%} {k / q:>9.5f} {per:>11.1f}")
