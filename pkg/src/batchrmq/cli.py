"""Command line front end: data generation, benchmark runs and answer verification."""
import argparse
import sys

import numpy as np

from ._util import RMQError
from .bench import (ALGORITHMS, WorkloadSpec, emit_csv, emit_plot, gen_permutation, gen_queries, read_answers,
                    read_array, read_queries, run_benchmark, write_answers, write_array, write_queries)
from .bench.formats import FormatError
from .core import solve_batch_sparse
from .sorting import SORT_KINDS

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_VERIFY_FAILED = 2


def _chain(text: str):
    try:
        return tuple(int(t) for t in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="batchrmq", description="Batched range minimum query benchmarks.")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen-array", help="write a seeded shuffled permutation of 1..n")
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--seed", type=int, required=True)
    g.add_argument("--out", required=True)

    g = sub.add_parser("gen-queries", help="write q seeded uniform query ranges over [0, n)")
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--q", type=int, required=True)
    g.add_argument("--seed", type=int, required=True)
    g.add_argument("--out", required=True)

    r = sub.add_parser("run", help="time one algorithm on stored data")
    r.add_argument("--algo", choices=ALGORITHMS, required=True)
    r.add_argument("--array", required=True)
    r.add_argument("--queries", required=True)
    blocks = r.add_mutually_exclusive_group()
    blocks.add_argument("--k", type=int)
    blocks.add_argument("--chain", type=_chain, help="block sizes K1,K2,... for bbst-ml")
    r.add_argument("--runs", type=int, default=7)
    r.add_argument("--threads", type=int, default=1)
    r.add_argument("--sort", choices=SORT_KINDS, default="radix")
    r.add_argument("--value-cache", action="store_true", help="pack values next to block minima")
    r.add_argument("--csv", required=True)
    r.add_argument("--plot")
    r.add_argument("--answers")

    v = sub.add_parser("verify", help="check stored answers against the sparse-table oracle")
    v.add_argument("--array", required=True)
    v.add_argument("--queries", required=True)
    v.add_argument("--answers", required=True)
    return p


def _run(args) -> int:
    values = read_array(args.array)
    batch = read_queries(args.queries)
    spec = WorkloadSpec(n=values.size, q=len(batch), algo=args.algo, seed=None, k=args.k, chain=args.chain,
                        runs=args.runs, threads=args.threads, sort=args.sort, value_cache=args.value_cache)
    rec = run_benchmark(spec, values, batch, keep_answers=args.answers is not None)
    emit_csv([rec], args.csv)
    if args.plot:
        emit_plot([rec], args.plot)
    if args.answers:
        write_answers(args.answers, rec.answers)
    print(f"{spec.algo} n={spec.n} q={spec.q} total={rec.t_total_ns / 1e6:.3f} ms "
          f"checksum={rec.answers_checksum:#018x}")
    return EXIT_OK


def verify_answers(values: np.ndarray, batch, answers: np.ndarray) -> int:
    """Number of answers that are out of range or not a minimum."""
    if answers.size != len(batch):
        return max(answers.size, len(batch))
    if answers.size == 0:
        return 0
    inside = (answers >= batch.left) & (answers <= batch.right)
    ref = values[solve_batch_sparse(values, batch)]
    got = values[np.where(inside, answers, batch.left)]
    return int(np.count_nonzero(~inside | (got != ref)))


def _verify(args) -> int:
    values = read_array(args.array)
    batch = read_queries(args.queries)
    answers = read_answers(args.answers)
    if answers.size != len(batch):
        print(f"FAIL: {answers.size} answers for {len(batch)} queries")
        return EXIT_VERIFY_FAILED
    batch.check_bounds(values.size)
    bad = verify_answers(values, batch, answers)
    if bad:
        print(f"FAIL: {bad} of {len(batch)} answers wrong")
        return EXIT_VERIFY_FAILED
    print(f"OK: {len(batch)} answers verified")
    return EXIT_OK


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "gen-array":
            write_array(args.out, gen_permutation(args.n, args.seed))
        elif args.command == "gen-queries":
            write_queries(args.out, gen_queries(args.n, args.q, args.seed))
        elif args.command == "run":
            return _run(args)
        else:
            return _verify(args)
    except (RMQError, FormatError, IndexError, OSError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_ERROR
    return EXIT_OK
