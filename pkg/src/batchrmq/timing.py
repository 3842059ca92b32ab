"""Per-stage wall-clock accounting used by the solvers and the harness."""
import time
from contextlib import contextmanager

STAGES = ("sort", "contract", "build", "answer")


class StageTimer:
    """Accumulates monotonic nanoseconds per named stage."""

    def __init__(self):
        self.ns = dict.fromkeys(STAGES, 0)

    @contextmanager
    def stage(self, name):
        t0 = time.perf_counter_ns()
        try:
            yield
        finally:
            self.ns[name] = self.ns.get(name, 0) + time.perf_counter_ns() - t0


class _NullTimer:
    @contextmanager
    def stage(self, name):
        yield


_NULL = _NullTimer()


def null_timer():
    return _NULL
