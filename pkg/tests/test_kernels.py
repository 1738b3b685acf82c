from itertools import combinations, product

import numpy as np
import pytest

from conftest import matrices, paley
from skewhad import _pykernels, kernels
from skewhad.search import max_Jk, seed_quadruple

try:
    from skewhad import _ckernels
except ImportError:  # extension not built
    _ckernels = None

needs_ext = pytest.mark.skipif(_ckernels is None, reason="compiled kernels not built")


def random_gens(rng, k, n):
    g1, g2 = [], []
    for _ in range(k):
        v = rng.integers(0, 3, n)
        g1.append(int(sum(1 << j for j in range(n) if v[j] == 1)))
        g2.append(int(sum(1 << j for j in range(n) if v[j] == 2)))
    return g1, g2


def test_backend_selected():
    assert kernels.BACKEND in ("cython", "python")
    assert kernels.backend_module("python") is _pykernels


@needs_ext
@pytest.mark.parametrize("q", [7, 11, 19, 23])
def test_quad_profile_parity(q):
    m = paley(q)
    assert _ckernels.quad_profile(m.rows, m.n) == _pykernels.quad_profile(m.rows, m.n)


@needs_ext
@pytest.mark.parametrize("n", [12, 16, 20, 24])
def test_canon_parity(n, rng):
    for m in matrices(n):
        a = _ckernels.canon_form(m.rows, n)
        b = _pykernels.canon_form(m.rows, n)
        assert list(a[0]) == list(b[0])
        assert list(a[3]) == list(b[3])
        # partial keys with trailing columns
        k = 6
        a = _ckernels.canon_form(m.rows[:k], k, n)
        b = _pykernels.canon_form(m.rows[:k], k, n)
        assert (list(a[0]), list(a[3])) == (list(b[0]), list(b[3]))


@needs_ext
@pytest.mark.parametrize("q", [7, 11, 19, 23, 31])
def test_chain_parity(q):
    m = paley(q)
    assert _ckernels.max_transitive_chain(m.rows, m.n)[0] == _pykernels.max_transitive_chain(m.rows, m.n)[0]


@needs_ext
@pytest.mark.parametrize("k,n", [(3, 8), (6, 12), (9, 18), (10, 20)])
def test_gf3_parity(k, n, rng):
    g1, g2 = random_gens(rng, k, n)
    assert list(_ckernels.gf3_weight_distribution(g1, g2, n)) == list(_pykernels.gf3_weight_distribution(g1, g2, n))
    for w in (3, 6):
        a = sorted(tuple(x) for x in _ckernels.gf3_words_of_weight(g1, g2, n, w))
        b = sorted(tuple(x) for x in _pykernels.gf3_words_of_weight(g1, g2, n, w))
        assert a == b


@needs_ext
@pytest.mark.parametrize("n,st,depth", [(12, (1, 1), 12), (16, (0, 2), 9), (20, (1, 2), 10), (24, (2, 1), 11)])
def test_rowsearch_parity(n, st, depth):
    form = seed_quadruple(n, *st)
    args = (n, list(form.segments), form.forced, form.group, st[0], st[1])
    a = _ckernels.RowSearch(*args).run(form.rows, depth, 0, 0)
    b = _pykernels.RowSearch(*args).run(form.rows, depth, 0, 0)
    assert [tuple(x) for x in a[0]] == [tuple(x) for x in b[0]]
    assert a[2] == b[2]


def brute_max_Jk(m):
    """Largest subset and signing whose principal block is a transitive tournament."""
    A = m.to_array().astype(int)
    n = m.n
    best = 1
    for k in range(2, n + 1):
        found = False
        for S in combinations(range(n), k):
            sub = A[np.ix_(S, S)]
            for sg in product((1, -1), repeat=k - 1):
                d = np.array((1,) + sg)
                T = d[:, None] * sub * d[None, :]
                scores = sorted(((T == 1).sum(axis=1) - 1).tolist())
                if scores == list(range(k)):
                    found = True
                    break
            if found:
                break
        if not found:
            break
        best = k
    return best


@pytest.mark.parametrize("m", [paley(3), paley(7), matrices(12)[0]], ids=["4", "8", "12"])
def test_max_Jk_brute(m):
    assert max_Jk(m) == brute_max_Jk(m)


def test_pure_python_fallback_selected_by_env():
    import subprocess
    import sys

    code = ("from skewhad import kernels; from skewhad.search import classify_all; "
            "print(kernels.BACKEND, classify_all(16).total)")
    env = dict(__import__("os").environ, SKEWHAD_PURE="1")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.split() == ["python", "2"]
