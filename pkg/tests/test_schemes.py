import numpy as np
import pytest

from conftest import matrices, paley
from skewhad.matrix import SignedPermutation, apply_signed_similarity
from skewhad.schemes import (
    Scheme, pair_hash, scheme_census, scheme_certificates, scheme_from, schemes_isomorphic, verify_scheme,
)


def test_order12_all_rows(h12):
    for i in range(12):
        s = scheme_from(h12, i)
        assert s.order == 11
        assert (s.A1.sum(axis=1) == 5).all()
        assert verify_scheme(s)


def test_transitive_tournament_fails():
    v = 5
    A = np.triu(np.ones((v, v), dtype=np.int64), 1)
    problems = []
    assert not verify_scheme(Scheme(A), problems)
    assert problems


def test_three_cycle_passes():
    A = np.array([[0, 1, 0], [0, 0, 1], [1, 0, 0]])
    assert verify_scheme(Scheme(A))


def test_bad_matrix_rejected():
    with pytest.raises(ValueError):
        scheme_from(paley(3).__class__.from_array(np.ones((4, 4), dtype=int)), 0)


def test_scheme_isomorphic_to_transpose(h12):
    s = scheme_from(h12, 0)
    assert schemes_isomorphic(s, s.transpose())


def test_relabel_invariance(h12, rng):
    s = scheme_from(h12, 3)
    p = [int(x) for x in rng.permutation(11)]
    assert scheme_certificates(s.relabel(p)) == scheme_certificates(s)


def test_census_stable_under_relabeling(h12, rng):
    base = scheme_census([h12])
    img = apply_signed_similarity(h12, SignedPermutation.random(12, rng))
    other = scheme_census([img])
    assert set(base.classes) == set(other.classes)
    assert base.tsv().splitlines()[0] == "pair_hash\torder\tmultiplicity\tmatrix\trow"
    assert base.rows()[0][2] == 12


def test_census_order20():
    ms = matrices(20)
    c = scheme_census(ms)
    assert sum(len(v) for v in c.classes.values()) == 40
    for h, srcs in c.classes.items():
        mid, row = srcs[0]
        assert pair_hash(scheme_certificates(scheme_from(ms[mid], row))) == h


def test_census_order_mismatch(h12):
    with pytest.raises(ValueError):
        scheme_census([h12, paley(7)])
