"""CSV and SVG output for benchmark records."""
import csv
import warnings
from typing import Iterable

from .harness import BenchRecord

COLUMNS = ("algo", "n", "q", "k_chain", "threads", "runs", "t_sort_ns", "t_contract_ns", "t_build_ns",
           "t_answer_ns", "t_total_ns", "extra_bytes", "extra_pct", "answers_checksum")


def emit_csv(records: Iterable[BenchRecord], destination):
    """Header plus one row per record; ``destination`` is a path or a text stream."""
    rows = [r.row() for r in records]

    def dump(f):
        w = csv.DictWriter(f, fieldnames=COLUMNS, lineterminator="\n")
        w.writeheader()
        w.writerows(rows)

    if hasattr(destination, "write"):
        dump(destination)
    else:
        with open(destination, "w", newline="", encoding="ascii") as f:
            dump(f)


def emit_plot(records: Iterable[BenchRecord], destination, title: str = None):
    """Total time against q (both log-scaled), one line per algorithm and block setting."""
    records = list(records)
    if not records:
        warnings.warn("no records to plot; nothing written", RuntimeWarning, stacklevel=2)
        return
    ns = {r.spec.n for r in records}
    if len(ns) != 1:
        raise ValueError(f"records must share n, got {sorted(ns)}")
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    series = {}
    for r in records:
        label = r.spec.algo if not r.spec.k_chain else f"{r.spec.algo} k={r.spec.k_chain}"
        if r.spec.threads > 1:
            label += f" t={r.spec.threads}"
        series.setdefault(label, []).append((r.spec.q, r.t_total_ns / 1e6))
    with matplotlib.rc_context({"svg.hashsalt": "batchrmq", "svg.fonttype": "none"}):
        fig, ax = plt.subplots(figsize=(7, 4.5))
        for label in sorted(series):
            pts = sorted(series[label])
            ax.plot([p[0] for p in pts], [p[1] for p in pts], marker="o", label=label)
        ax.set_xscale("log")
        ax.set_yscale("log")
        ax.set_xlabel("number of queries q")
        ax.set_ylabel("total time [ms]")
        ax.set_title(title or f"n = {ns.pop():,}")
        ax.grid(True, which="both", alpha=0.3)
        ax.legend(fontsize="small")
        fig.tight_layout()
        fig.savefig(destination, format="svg", metadata={"Date": None})
        plt.close(fig)
