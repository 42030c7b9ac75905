import numpy as np
import pytest

from cbnorm.numerics import haar_unitary

_CRITERIA = []


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def criterion():
    """Record one acceptance line and fail the test if ``ok`` is false."""

    def record(label, ok, detail=""):
        _CRITERIA.append((label, bool(ok), detail))
        assert ok, f"{label}: {detail}"

    return record


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for label, ok, detail in _CRITERIA:
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] {label}  {detail}")


def random_matrix(rng, rows, cols):
    return rng.standard_normal((rows, cols)) + 1j * rng.standard_normal((rows, cols))


def random_unitary_pair_maps(rng, count, dims=(2, 3, 4)):
    out = []
    for _ in range(count):
        n = int(rng.choice(dims))
        out.append((haar_unitary(n, rng), haar_unitary(n, rng)))
    return out
