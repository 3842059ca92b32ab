"""Walk one tiny instance through every stage of the contracted pipeline.

    python demos/01_worked_example.py
"""
import numpy as np

from batchrmq.baseline import contract_marked, solve_batch_st_rmq_con
from batchrmq.bbst_con import BbstConParams, answer_one, build_block_sparse, solve_batch_bbst_con
from batchrmq.contraction import build_contracted, collect_endpoints, remap_queries, sort_endpoints
from batchrmq.core import QueryBatch, naive_rmq
from batchrmq.multilevel import build_multilevel, solve_batch_bbst

A = np.array([5, 3, 8, 2, 7, 6, 9, 1], np.int32)
batch = QueryBatch.from_pairs([(1, 4), (3, 6), (0, 7), (2, 2)])
print("A       =", A.tolist())
print("queries =", [(q.left, q.right) for q in batch])

# stage 1: endpoints sorted by position
eps = sort_endpoints(collect_endpoints(batch))
print("\nsorted endpoint positions:", eps.pos.tolist())

# stage 2: one minimum per area between consecutive distinct endpoints
c = build_contracted(A, eps)
print("boundary :", c.boundary.tolist())
print("A_Q      :", c.aq_values.tolist(), " (origins", c.aq_origin.tolist(), ")")
cq = remap_queries(batch, c)
for i, q in enumerate(batch):
    what = "degenerate" if cq.degenerate[i] else f"areas {cq.cleft[i]}..{cq.cright[i]}"
    print(f"  ({q.left},{q.right}) -> {what}")

# stage 3: block sparse table over A_Q
table = build_block_sparse(c.aq_values, 2)
print("\nblock table (k=2), rows are doubling levels:")
print(table.entries)

# stage 4: speculative answers, with scan counts
for i, q in enumerate(batch):
    if cq.degenerate[i]:
        continue
    stats = {}
    p = answer_one(table, c.aq_values, c.aq_origin, (cq.cleft[i], cq.cright[i]), stats)
    print(f"  ({q.left},{q.right}) -> position {p} value {A[p]}  scanned {stats['scanned']} cells")

print("\nend to end:")
print("  naive      ", [naive_rmq(A, q) for q in batch])
print("  bbst-con   ", solve_batch_bbst_con(A, batch, BbstConParams(k=2)).tolist())
print("  st-rmq-con ", solve_batch_st_rmq_con(A, batch).tolist(),
      "  (its A_Q:", contract_marked(A, batch).aq_values.tolist(), ")")
print("  bbst [2]   ", solve_batch_bbst(A, batch, [2]).tolist())
ml = build_multilevel(A, [2, 4])
print("  bbst [2,4] ", solve_batch_bbst(A, batch, [2, 4]).tolist(),
      "  level minima", ml.level_minima(0).tolist(), ml.level_minima(1).tolist())
