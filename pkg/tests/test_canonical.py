from itertools import permutations, product

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import B4, matrices, paley
from skewhad.canonical import (
    canon_codes, canon_hex, column_codes, from_sh_vector, is_sh_canonical, leading_block,
    matrix_from_codes, partial_key, sh_canonical_form, sh_equivalent, sh_vector,
)
from skewhad.matrix import SignedPermutation, apply_signed_similarity, validate
from skewhad.search import max_Jk


def brute_min_vector(m):
    """Least v over every signed permutation, vectorised over the sign choices."""
    n = m.n
    H = m.to_array().astype(np.int64)
    signs = 1 - 2 * ((np.arange(1 << n)[:, None] >> np.arange(n)) & 1)
    iu = [(i, j) for j in range(1, n) for i in range(j)]
    a_idx = np.array([i for i, _ in iu])
    b_idx = np.array([j for _, j in iu])
    weights = 1 << np.arange(len(iu) - 1, -1, -1, dtype=np.int64)
    best = None
    for p in permutations(range(n)):
        Hp = H[np.ix_(p, p)]
        ent = signs[:, a_idx] * signs[:, b_idx] * Hp[a_idx, b_idx]
        val = int(((ent < 0).astype(np.int64) @ weights).min())
        best = val if best is None else min(best, val)
    return best


def vec_int(v):
    return int("".join(map(str, v)), 2)


@pytest.mark.parametrize("m", [B4, paley(7)], ids=["order4", "order8"])
def test_canonical_is_global_minimum(m):
    c, _ = sh_canonical_form(m)
    assert vec_int(sh_vector(c)) == brute_min_vector(m)


def test_sh_vector_round_trip():
    m = paley(11)
    assert from_sh_vector(sh_vector(m), 12) == m


def test_codes_round_trip():
    for m in matrices(20):
        c, _ = sh_canonical_form(m)
        assert matrix_from_codes(column_codes(c), c.n) == c


@pytest.mark.parametrize("n", [8, 12, 16, 20, 24])
def test_canonical_idempotent_and_witnessed(n):
    for m in matrices(n):
        c, p = sh_canonical_form(m)
        assert apply_signed_similarity(m, p) == c
        assert is_sh_canonical(c)
        c2, _ = sh_canonical_form(c)
        assert c2 == c
        assert validate(c)["skew"]
        assert c.rows[0] == 0


@pytest.mark.parametrize("n", [12, 20, 24])
def test_leading_J_block(n):
    # the canonical form starts with the largest all-+1 upper block
    for m in matrices(n):
        c, _ = sh_canonical_form(m)
        k = max_Jk(m)
        assert all(code == 0 for code in column_codes(c, k))
        assert column_codes(c, k + 1)[k] != 0


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1), st.sampled_from([7, 11, 19, 23]))
def test_orbit_constancy(seed, q):
    m = paley(q)
    rng = np.random.default_rng(seed)
    img = apply_signed_similarity(m, SignedPermutation.random(m.n, rng))
    assert canon_hex(img) == canon_hex(m)
    assert sh_equivalent(img, m)


def test_distinct_classes_differ():
    ms = matrices(24)
    keys = {canon_hex(m) for m in ms}
    assert len(keys) == len(ms) == 16
    assert not sh_equivalent(ms[0], ms[1])


def test_partial_key_invariant(rng):
    m = paley(23)
    for _ in range(10):
        # signed permutation fixing the first 6 rows as a set, applied to a 6 x n slice
        k = 6
        head = list(rng.permutation(k))
        tail = list(k + rng.permutation(m.n - k))
        p = SignedPermutation(tuple(int(x) for x in head + tail),
                              tuple(int(x) for x in rng.choice([-1, 1], size=m.n)))
        img = apply_signed_similarity(m, p)
        assert partial_key(img.rows[:k], k, m.n) == partial_key(m.rows[:k], k, m.n)


def test_leading_block():
    m = paley(11)
    b = leading_block(m, 5)
    assert b.n == 5 and np.array_equal(b.to_array(), m.to_array()[:5, :5])


def test_canon_codes_of_block():
    m = paley(19)
    assert canon_codes(m, 6) == canon_codes(leading_block(m, 6))
