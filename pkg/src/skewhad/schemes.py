"""Two-class nonsymmetric association schemes from skew Hadamard matrices.

Conjugating H by the diagonal of row i makes that row all +1; deleting it
leaves R_i, and A1 = (J - 2I + R_i) / 2 is a doubly regular tournament.
A2 = A1^T is never stored.
"""

import hashlib
from dataclasses import dataclass

import numpy as np

from .graphcanon import ColoredGraph, canonical_label_graph
from .matrix import as_matrix, validate


@dataclass(frozen=True)
class Scheme:
    A1: np.ndarray

    @property
    def order(self):
        return self.A1.shape[0]

    def A2(self):
        v = self.order
        return np.ones((v, v), dtype=np.int64) - np.eye(v, dtype=np.int64) - self.A1

    def relabel(self, perm):
        perm = np.asarray(perm)
        B = np.zeros_like(self.A1)
        B[np.ix_(perm, perm)] = self.A1
        return Scheme(B)

    def transpose(self):
        return Scheme(self.A1.T.copy())


def scheme_from(m, i):
    """A(H, i) for 0-based row index i."""
    m = as_matrix(m)
    if not validate(m)["skew"]:
        raise ValueError("input is not a skew Hadamard matrix")
    H = m.to_array().astype(np.int64)
    n = m.n
    if not 0 <= i < n:
        raise IndexError(f"row {i} out of range")
    d = H[i]
    R = (d[:, None] * H) * d[None, :]
    keep = [j for j in range(n) if j != i]
    R = R[np.ix_(keep, keep)]
    v = n - 1
    twice = np.ones((v, v), dtype=np.int64) - 2 * np.eye(v, dtype=np.int64) + R
    return Scheme(twice // 2)


def _in_span(M, basis):
    # solve from three positions where the basis matrices are 'pure', then check globally
    v = M.shape[0]
    I, A1, A2 = basis
    coeff = [M[0, 0]]
    pos1 = np.argwhere(A1 == 1)
    pos2 = np.argwhere(A2 == 1)
    if len(pos1) == 0 or len(pos2) == 0:
        return False
    coeff.append(M[tuple(pos1[0])])
    coeff.append(M[tuple(pos2[0])])
    return np.array_equal(M, coeff[0] * I + coeff[1] * A1 + coeff[2] * A2)


def verify_scheme(s, report=None):
    A1 = np.asarray(s.A1, dtype=np.int64)
    v = A1.shape[0]
    I = np.eye(v, dtype=np.int64)
    J = np.ones((v, v), dtype=np.int64)
    A2 = J - I - A1
    problems = []
    if not np.all((A1 == 0) | (A1 == 1)) or np.any(np.diag(A1)):
        problems.append("A1 is not a 0/1 matrix with zero diagonal")
    if np.any(A2 < 0) or np.any(A2 > 1):
        problems.append("A0 + A1 + A2 != J")
    basis = (I, A1, A2)
    for X in (A1, A2):
        if not any(np.array_equal(X.T, B) for B in basis):
            problems.append("transpose closure fails")
    if not problems:
        for X in (A1, A2):
            for Y in (A1, A2):
                if not _in_span(X @ Y, basis):
                    problems.append("product outside the span")
                    break
    if report is not None:
        report.extend(problems)
    return not problems


def _clg(A):
    g = ColoredGraph.from_adjacency(A)
    return canonical_label_graph(g)


def scheme_certificates(s):
    """Sorted pair of canonical-graph digests of A1 and A2."""
    a = _clg(s.A1).digest
    b = _clg(s.A2()).digest
    return tuple(sorted((a, b)))


def schemes_isomorphic(s, t):
    if s.order != t.order:
        return False
    return scheme_certificates(s) == scheme_certificates(t)


def pair_hash(pair):
    return hashlib.sha256("".join(pair).encode()).hexdigest()


@dataclass
class SchemeCensus:
    order: int
    classes: dict      # pair hash -> list of (matrix id, row)

    def rows(self):
        out = []
        for h in sorted(self.classes):
            srcs = sorted(self.classes[h])
            out.append((h, self.order, len(srcs), srcs[0][0], srcs[0][1]))
        return out

    def tsv(self):
        lines = ["pair_hash\torder\tmultiplicity\tmatrix\trow"]
        lines += ["\t".join(str(x) for x in r) for r in self.rows()]
        return "\n".join(lines) + "\n"


def scheme_census(matrices, rows=None):
    """Classify A(H, i) over the given matrices (ids are list positions) and rows."""
    classes = {}
    order = None
    for mid, m in enumerate(matrices):
        m = as_matrix(m)
        order = m.n - 1 if order is None else order
        if m.n - 1 != order:
            raise ValueError("all matrices must have the same order")
        for i in (range(m.n) if rows is None else rows):
            key = pair_hash(scheme_certificates(scheme_from(m, i)))
            classes.setdefault(key, []).append((mid, i))
    return SchemeCensus(order, classes)

