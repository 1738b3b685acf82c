import os
from itertools import combinations

import numpy as np
import pytest

from conftest import census, matrices, paley
from skewhad.canonical import canon_hex
from skewhad.matrix import matrix_skew_type, quad_stats, validate
from skewhad.search import (
    BudgetExceeded, CheckpointMismatch, SearchConfig, check_completed, classify_all, classify_skew_type,
    first_solutions, forced_row, k_upper_bound, max_Jk, mod4_targets, next_rows, orderly_classify,
    orderly_generate, parity_ok, seed_quadruple, seeded_skew_types,
)

# column pattern of rows 2-4 relative to row 1 -> (label, sign in the mod-4 sums)
MOD4_CLASSES = {
    (1, 1, 1): ("x", 1), (1, -1, -1): ("x", 1), (-1, 1, -1): ("x", 1), (-1, -1, 1): ("x", -1),
    (1, 1, -1): ("y", 1), (1, -1, 1): ("y", 1), (-1, 1, 1): ("y", 1), (-1, -1, -1): ("y", -1),
}


def mod4_holds(H, quad, r):
    """Mod-4 congruences for row r against the quadruple, after normalising columns by the first row."""
    n = len(H)
    a, b, c, d = quad
    sgn = H[a]
    s = sum(1 for j in range(n) if (H[b, j] * sgn[j], H[c, j] * sgn[j], H[d, j] * sgn[j]) == (1, 1, 1))
    t = n // 4 - s
    X = Y = 0
    for j in range(n):
        lab, w = MOD4_CLASSES[(H[b, j] * sgn[j], H[c, j] * sgn[j], H[d, j] * sgn[j])]
        v = w * H[r, j] * sgn[j]
        if lab == "x":
            X += v
        else:
            Y += v
    return (X - (2 * s - n // 2)) % 4 == 0 and (Y - (2 * t - n // 2)) % 4 == 0


@pytest.mark.parametrize("n,t,e", [(12, 1, 1), (20, 1, 2), (24, 2, 1), (28, 3, 2), (36, 2, 1), (16, 0, 2)])
def test_seed_quadruple(n, t, e):
    form = seed_quadruple(n, t, e)
    rows = form.rows
    for a, b in combinations(range(4), 2):
        assert (rows[a] ^ rows[b]).bit_count() == n // 2
    x = rows[0] ^ rows[1] ^ rows[2] ^ rows[3]
    P = n - 2 * x.bit_count()
    Q = 4 - 2 * (x & 15).bit_count()
    assert (n - abs(P)) // 8 == t
    assert (0 if P * Q < 0 else 1 if Q == 0 else 2) == e
    assert len(form.segments) == n


@pytest.mark.parametrize("n,st", [(12, (0, 1)), (12, (0, 2)), (20, (3, 1)), (10, (1, 1)), (12, (1, 0))])
def test_seed_rejects(n, st):
    with pytest.raises(ValueError):
        seed_quadruple(n, *st)


def test_mod4_targets():
    assert mod4_targets(36, 7, 2) == ((14 - 18) % 4, (4 - 18) % 4)
    with pytest.raises(ValueError):
        mod4_targets(36, 7, 3)


@pytest.mark.parametrize("n", [12, 20, 24])
def test_mod4_congruences_every_row(n, rng):
    for m in matrices(n):
        H = m.to_array().astype(int)
        quads = [tuple(sorted(int(x) for x in rng.choice(n, 4, replace=False))) for _ in range(6)]
        for q in quads:
            for r in range(n):
                if r not in q:
                    assert mod4_holds(H, q, r)


@pytest.mark.parametrize("n,st", [(20, (1, 1)), (20, (1, 2)), (24, (2, 1)), (28, (2, 2))])
def test_forced_rows_and_parity(n, st):
    mats, exhausted, _ = first_solutions(n, st, limit=1)
    assert mats and not exhausted
    form = seed_quadruple(n, *st)
    m = mats[0]
    assert check_completed(m, form)
    assert forced_row(m.rows[: form.forced], form) == m.rows[form.forced]
    assert all(parity_ok(r, form) for r in m.rows[4:])
    assert matrix_skew_type(m) == st


def test_forced_row_infeasible_signal():
    form = seed_quadruple(20, 1, 1)
    mats, _, _ = first_solutions(20, (1, 1), 1)
    rows = list(mats[0].rows[: form.forced])
    rows[4] ^= 1 << 19
    assert forced_row(rows, form) is None


def test_next_rows():
    h = paley(7)
    got = next_rows(h.rows[:7], 8)
    assert h.rows[7] in got
    for r in got:
        assert all((r ^ x).bit_count() == 4 for x in h.rows[:7])


@pytest.mark.parametrize("n,expected", [(1, 1), (2, 1), (4, 1), (8, 1), (12, 1), (16, 2), (20, 2)])
def test_small_orders(n, expected):
    assert census(n).total == expected
    for m in census(n).matrices():
        assert validate(m)["skew"]


@pytest.mark.parametrize("n", [4, 8, 12, 16])
def test_orderly_oracle_agrees(n):
    got = sorted(k for v in census(n).by_type.values() for k in v)
    assert orderly_classify(n) == got


def test_orderly_canonical_levels():
    res = orderly_generate(12, 6)
    assert all(len(v) >= 1 for v in res.levels.values())
    assert res.counts[1] == 1


def test_seeded_types():
    assert (0, 2) in seeded_skew_types(24) and (0, 2) not in seeded_skew_types(28)
    assert (3, 2) in seeded_skew_types(28)


@pytest.mark.parametrize("n,k", [(2, 2), (4, 3), (8, 4), (12, 5), (20, 6), (36, 9)])
def test_k_upper_bound(n, k):
    assert k_upper_bound(n) == k


@pytest.mark.parametrize("n", [8, 12, 16, 20, 24])
def test_max_Jk_within_bound(n):
    for m in matrices(n):
        assert max_Jk(m) <= k_upper_bound(n)


def test_transpose_route_order24():
    c = census(24)
    assert {k: len(v) for k, v in c.by_type.items()} == {(0, 2): 14, (1, 0): 1, (2, 1): 1}
    for key in c.by_type[(1, 0)]:
        assert key in c.by_type[(1, 0)]


# ------------------------------------------------------- workers and resume

def census_text(c):
    return "\n".join(c.lines())


def test_workers_identical():
    a = classify_skew_type(20, (1, 2), SearchConfig(workers=1))
    b = classify_skew_type(20, (1, 2), SearchConfig(workers=3))
    assert a.keys == b.keys and a.complete and b.complete


def test_interrupt_resume(tmp_path):
    cp = str(tmp_path / "cp")
    full = classify_skew_type(24, (2, 1), SearchConfig())
    part = classify_skew_type(24, (2, 1), SearchConfig(checkpoint=cp, stop_after=2))
    assert not part.complete
    done = classify_skew_type(24, (2, 1), SearchConfig(checkpoint=cp, workers=2))
    assert done.complete and done.keys == full.keys


def test_checkpoint_mismatch(tmp_path):
    cp = str(tmp_path / "cp")
    classify_skew_type(20, (1, 2), SearchConfig(checkpoint=cp, stop_after=1))
    with pytest.raises(CheckpointMismatch):
        classify_skew_type(20, (1, 2), SearchConfig(checkpoint=cp, dedup_depths=(6,)))
    with open(cp) as fh:
        first = fh.readline()
    with open(cp, "w") as fh:
        fh.write(first)
    with pytest.raises(CheckpointMismatch):
        classify_skew_type(24, (1, 2), SearchConfig(checkpoint=cp))


def test_node_budget():
    with pytest.raises(BudgetExceeded):
        classify_skew_type(24, (0, 2), SearchConfig(node_budget=5))
