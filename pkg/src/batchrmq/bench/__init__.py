"""Workload generation, timing, memory accounting and reporting."""
from .formats import read_answers, read_array, read_queries, write_answers, write_array, write_queries
from .harness import ALGORITHMS, BenchRecord, WorkloadSpec, answers_checksum, run_benchmark, solve
from .memory import account_memory, table_cells
from .report import emit_csv, emit_plot
from .workload import SplitMix64, gen_permutation, gen_queries

__all__ = [
    "ALGORITHMS", "BenchRecord", "SplitMix64", "WorkloadSpec", "account_memory", "answers_checksum",
    "emit_csv", "emit_plot", "gen_permutation", "gen_queries", "read_answers", "read_array",
    "read_queries", "run_benchmark", "solve", "table_cells", "write_answers", "write_array",
    "write_queries",
]
