import functools

import numpy as np
import pytest

from skewhad.matrix import SignMatrix
from skewhad.search import SearchConfig, classify_all

B4 = SignMatrix.from_array([[1, 1, 1, 1], [-1, 1, 1, -1], [-1, -1, 1, 1], [-1, 1, -1, 1]])
A4 = SignMatrix.from_array(np.ones((4, 4), dtype=int))


@functools.lru_cache(maxsize=None)
def census(n):
    return classify_all(n, SearchConfig())


@functools.lru_cache(maxsize=None)
def matrices(n):
    return tuple(census(n).matrices())


def paley(q):
    """Paley type I skew Hadamard matrix of order q + 1 for a prime q = 3 mod 4."""
    chi = [0] + [1 if pow(x, (q - 1) // 2, q) == 1 else -1 for x in range(1, q)]
    n = q + 1
    H = np.ones((n, n), dtype=int)
    H[1:, 0] = -1
    for i in range(q):
        for j in range(q):
            H[i + 1, j + 1] = chi[(j - i) % q] if i != j else 1
    return SignMatrix.from_array(H)


@pytest.fixture(scope="session")
def h12():
    return matrices(12)[0]


@pytest.fixture
def rng():
    return np.random.default_rng(20240521)


# one line per acceptance criterion, printed after the run
ACCEPTANCE = {}


def record(criterion, ok, detail):
    ACCEPTANCE[criterion] = (ok, detail)
    line = f"criterion {criterion}: {'PASS' if ok else 'FAIL'} - {detail}"
    print(line)
    return ok


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for c in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[c]
        terminalreporter.write_line(f"criterion {c}: {'PASS' if ok else 'FAIL'} - {detail}")
