"""Extra space as a percentage of the input, for the block sizes and query counts of interest.

    python demos/05_memory_model.py
"""
from batchrmq.bench import WorkloadSpec, account_memory


def pct(spec):
    return account_memory(spec) / (4 * spec.n) * 100


print(f"{'variant':<28} {'n=1e8':>8} {'n=1e9':>8}")
for k in (2048, 4096, 8192, 16384, 32768):
    row = [pct(WorkloadSpec(n=n, q=0, algo="bbst", k=k, runs=1)) for n in (10**8, 10**9)]
    print(f"{'BbST, k=' + str(k):<28} {row[0]:>8.2f} {row[1]:>8.2f}")
for mult, label in ((1, "sqrt n"), (32, "32 sqrt n"), (1024, "1024 sqrt n")):
    # sqrt(n) rounded as 10,000 and 32,000
    row = [pct(WorkloadSpec(n=n, q=base * mult, algo="bbst-con", k=512, runs=1))
           for n, base in ((10**8, 10_000), (10**9, 32_000))]
    print(f"{'BbST_CON, q=' + label:<28} {row[0]:>8.2f} {row[1]:>8.2f}")
for chain in ((256, 4096), (1024, 16384), (64, 1024, 16384)):
    row = [pct(WorkloadSpec(n=n, q=0, algo="bbst-ml", chain=chain, runs=1)) for n in (10**8, 10**9)]
    print(f"{'multi-level ' + ','.join(map(str, chain)):<28} {row[0]:>8.2f} {row[1]:>8.2f}")
