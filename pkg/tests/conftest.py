import numpy as np
import pytest

from batchrmq.core import QueryBatch

WORKED = np.array([5, 3, 8, 2, 7, 6, 9, 1], np.int32)


def random_batch(rng, n, q):
    a = rng.integers(0, n, q)
    b = rng.integers(0, n, q)
    return QueryBatch(a, b)


def oracle_values(values, batch):
    return np.array([values[l:r + 1].min() for l, r in zip(batch.left, batch.right)], dtype=np.int64)


def assert_valid_answers(values, batch, answers):
    """Range membership plus value equality with a linear scan."""
    answers = np.asarray(answers)
    assert answers.shape == (len(batch),)
    if not len(batch):
        return
    assert np.all(answers >= batch.left) and np.all(answers <= batch.right)
    np.testing.assert_array_equal(values[answers], oracle_values(values, batch))


@pytest.fixture
def worked():
    return WORKED.copy()


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


ACCEPTANCE_LINES = []


def report_criterion(number: int, ok: bool, detail: str):
    """Record the verdict for one acceptance criterion; printed in the terminal summary."""
    line = f"criterion {number}: {'PASS' if ok else 'FAIL'}  {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    return ok


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
