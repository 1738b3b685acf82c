"""Ternary codes from Hadamard matrices.

Vectors over GF(3) are two bitplanes: ``p1`` marks entries equal to 1 and
``p2`` entries equal to 2.  A matrix entry +1 maps to 1 and -1 maps to 2.
"""

from dataclasses import dataclass

import numpy as np

from . import kernels
from .graphcanon import ColoredGraph, canonical_label_graph
from .matrix import as_matrix

MAX_ENUM_DIM = 19


class IntegrityError(AssertionError):
    pass


def gf3_add(a, b):
    a1, a2 = a
    b1, b2 = b
    a0 = ~(a1 | a2)
    b0 = ~(b1 | b2)
    return ((a1 & b0) | (a0 & b1) | (a2 & b2), (a2 & b0) | (a0 & b2) | (a1 & b1))


def gf3_neg(a):
    return (a[1], a[0])


def gf3_scale(a, c):
    c %= 3
    if c == 0:
        return (0, 0)
    return a if c == 1 else gf3_neg(a)


def gf3_get(a, j):
    return 1 if (a[0] >> j) & 1 else (2 if (a[1] >> j) & 1 else 0)


def gf3_dot(a, b):
    plus = ((a[0] & b[0]) | (a[1] & b[1])).bit_count()
    minus = ((a[0] & b[1]) | (a[1] & b[0])).bit_count()
    return (plus - minus) % 3


def weight(a):
    return (a[0] | a[1]).bit_count()


def to_vector(a, n):
    return [gf3_get(a, j) for j in range(n)]


def from_vector(v):
    p1 = p2 = 0
    for j, x in enumerate(v):
        x %= 3
        if x == 1:
            p1 |= 1 << j
        elif x == 2:
            p2 |= 1 << j
    return (p1, p2)


def row_reduce(vectors, n):
    """Reduced echelon basis (pivot = lowest column index, pivot entry 1)."""
    rows = [v for v in vectors]
    basis = []
    pivots = []
    for c in range(n):
        p = next((i for i, r in enumerate(rows) if gf3_get(r, c)), None)
        if p is None:
            continue
        piv = rows.pop(p)
        piv = gf3_scale(piv, 2 if gf3_get(piv, c) == 2 else 1)
        rows = [gf3_add(r, gf3_scale(piv, -gf3_get(r, c))) if gf3_get(r, c) else r for r in rows]
        basis = [gf3_add(b, gf3_scale(piv, -gf3_get(b, c))) if gf3_get(b, c) else b for b in basis]
        basis.append(piv)
        pivots.append(c)
        rows = [r for r in rows if r != (0, 0)]
    return basis, pivots


@dataclass(frozen=True)
class TernaryCode:
    n: int
    gens: tuple          # reduced echelon generator rows as (p1, p2)

    @property
    def k(self):
        return len(self.gens)

    @classmethod
    def from_vectors(cls, vectors, n):
        basis, _ = row_reduce(list(vectors), n)
        return cls(n, tuple(basis))

    def generator_matrix(self):
        return np.array([to_vector(g, self.n) for g in self.gens], dtype=np.int64).reshape(self.k, self.n)

    def contains(self, v):
        basis, _ = row_reduce(list(self.gens) + [v], self.n)
        return len(basis) == self.k


def code_from_matrix(m):
    m = as_matrix(m)
    full = (1 << m.n) - 1
    return TernaryCode.from_vectors([(~r & full, r) for r in m.rows], m.n)


def is_self_dual(code):
    if 2 * code.k != code.n:
        return False
    g = code.gens
    return all(gf3_dot(g[i], g[j]) == 0 for i in range(len(g)) for j in range(i, len(g)))


def weight_distribution(code, backend=None):
    """A_w for w = 0..n over all 3^k codewords."""
    if code.k > MAX_ENUM_DIM:
        raise ValueError(f"dimension {code.k} is over the enumeration budget {MAX_ENUM_DIM}")
    mod = kernels if backend is None else kernels.backend_module(backend)
    g1 = [g[0] for g in code.gens]
    g2 = [g[1] for g in code.gens]
    return list(mod.gf3_weight_distribution(g1, g2, code.n))


def naive_weight_distribution(code):
    """Full expansion over message vectors; only for tiny dimensions."""
    G = code.generator_matrix()
    k, n = G.shape
    msgs = np.array(np.meshgrid(*[np.arange(3)] * k, indexing="ij")).reshape(k, -1).T if k else np.zeros((1, 0), int)
    words = (msgs @ G) % 3
    w = (words != 0).sum(axis=1)
    return list(np.bincount(w, minlength=n + 1))


def words_of_weight(code, w, backend=None):
    mod = kernels if backend is None else kernels.backend_module(backend)
    g1 = [g[0] for g in code.gens]
    g2 = [g[1] for g in code.gens]
    return list(mod.gf3_words_of_weight(g1, g2, code.n, w))


def minimum_weight(dist):
    return next(w for w in range(1, len(dist)) if dist[w])


W_ALPHA = {
    0: (1, 0), 9: (0, 1), 12: (42840, -9), 15: (1400256, 36), 18: (18452280, -84),
    21: (90370368, 126), 24: (162663480, -126), 27: (97808480, 84), 30: (16210656, -36),
    33: (471240, 9), 36: (888, -1),
}


def predicted_W_alpha(alpha):
    """Weight distribution (length 37 list) of a near-extremal [36, 18, 9] self-dual code."""
    if alpha % 8 or not 1 <= alpha <= 888:
        raise ValueError(f"alpha must be a multiple of 8 in [8, 888], got {alpha}")
    dist = [0] * 37
    for w, (a, b) in W_ALPHA.items():
        dist[w] = a + b * alpha
    return dist


@dataclass(frozen=True)
class NearExtremal:
    near_extremal: bool
    alpha: int = None
    a6: int = 0
    a9: int = 0
    min_weight: int = 0


def near_extremal_check(code, dist=None):
    if code.n != 36 or not is_self_dual(code):
        raise ValueError("expects a self-dual code of length 36")
    dist = weight_distribution(code) if dist is None else dist
    d = minimum_weight(dist)
    if d == 9:
        alpha = dist[9]
        if dist != predicted_W_alpha(alpha):
            raise IntegrityError("weight distribution is not of the W_alpha form")
        return NearExtremal(True, alpha, 0, alpha, 9)
    return NearExtremal(False, None, dist[6], dist[9], d)


def equivalence_graph(code, words=None):
    """Codeword vertices (weight 9) joined to coordinate vertices (i, y); (i, 1) and (i, 2) paired."""
    n = code.n
    words = words_of_weight(code, 9) if words is None else words
    nw = len(words)
    edges = []
    for a, c in enumerate(words):
        for j in range(n):
            y = gf3_get(c, j)
            if y:
                edges.append((a, nw + 2 * j + (y - 1)))
    for j in range(n):
        edges.append((nw + 2 * j, nw + 2 * j + 1))
        edges.append((nw + 2 * j + 1, nw + 2 * j))
    colors = [0] * nw + [1] * (2 * n)
    return ColoredGraph.from_edges(nw + 2 * n, edges, colors, directed=True)


def generated_by(code, words):
    basis, _ = row_reduce(list(words), code.n)
    return len(basis) == code.k


def codes_equivalent(a, b, node_budget=500000):
    """True / False, or None when neither invariant nor the graph test decides."""
    if a.n != b.n or a.k != b.k:
        return False
    da, db = weight_distribution(a), weight_distribution(b)
    if (da[6], da[9]) != (db[6], db[9]):
        return False
    wa, wb = words_of_weight(a, 9), words_of_weight(b, 9)
    if generated_by(a, wa) and generated_by(b, wb):
        ca = canonical_label_graph(equivalence_graph(a, wa), node_budget)
        cb = canonical_label_graph(equivalence_graph(b, wb), node_budget)
        return ca == cb
    return None


def monomial_image(code, perm, scales):
    """Apply coordinate j -> perm[j] with multiplier scales[j] in {1, 2}."""
    out = []
    for g in code.gens:
        v = [0] * code.n
        for j in range(code.n):
            v[perm[j]] = (gf3_get(g, j) * scales[j]) % 3
        out.append(from_vector(v))
    return TernaryCode.from_vectors(out, code.n)


@dataclass(frozen=True)
class Design:
    v: int
    k: int
    blocks: tuple         # supports as bitmasks, sorted
    lam: int


def weight9_design(code, alpha=None, words=None):
    words = words_of_weight(code, 9) if words is None else words
    alpha = len(words) if alpha is None else alpha
    blocks = sorted({c[0] | c[1] for c in words})
    degs = [sum((b >> p) & 1 for b in blocks) for p in range(code.n)]
    if len(set(degs)) != 1:
        raise IntegrityError("weight-9 supports are not a 1-design")
    if any(b.bit_count() != 9 for b in blocks):
        raise IntegrityError("block of wrong size")
    lam = degs[0]
    if 8 * lam != alpha or 2 * len(blocks) != alpha:
        raise IntegrityError(f"lambda {lam} and {len(blocks)} blocks do not match alpha {alpha}")
    return Design(code.n, 9, tuple(blocks), lam)


def norm9_vectors(dist, n):
    """Integer vectors of squared length 9 congruent mod 3 to a codeword, from A_w."""
    get = lambda w: dist[w] if w < len(dist) else 0  # noqa: E731
    return 2 * n + 3 * get(3) + 6 * get(6) + get(9)


def kissing_number(code, dist=None):
    """Minimal vectors of the Construction A lattice of a near-extremal length-36 code."""
    res = near_extremal_check(code, dist)
    if not res.near_extremal:
        raise ValueError("kissing number formula needs minimum weight 9")
    return res.alpha + 72


def brute_force_norm9(code, max_weight=9):
    """Count integer x with x . x = 9 and x mod 3 in the code, codeword by codeword."""
    lifts = {0: [0, 3, -3], 1: [1, -2], 2: [-1, 2]}
    total = 0
    words = [(0, 0)]
    for w in (3, 6, 9):
        if w <= max_weight:
            words += words_of_weight(code, w)
    for c in words:
        # count sign/lift choices per coordinate with squared sum 9
        ways = {0: 1}
        for j in range(code.n):
            opts = lifts[gf3_get(c, j)]
            nxt = {}
            for s, cnt in ways.items():
                for x in opts:
                    t = s + x * x
                    if t <= 9:
                        nxt[t] = nxt.get(t, 0) + cnt
            ways = nxt
        total += ways.get(9, 0)
    return total


def code_report(m):
    """Everything the code command prints, as an ordered dict of fields."""
    code = code_from_matrix(m)
    sd = is_self_dual(code)
    if code.k > MAX_ENUM_DIM:
        return {"length": code.n, "dimension": code.k, "self_dual": sd, "distribution": None}
    dist = weight_distribution(code)
    rep = {
        "length": code.n,
        "dimension": code.k,
        "self_dual": sd,
        "min_weight": minimum_weight(dist),
        "A6": dist[6] if len(dist) > 6 else 0,
        "A9": dist[9] if len(dist) > 9 else 0,
        "sum": sum(dist),
        "distribution": {w: a for w, a in enumerate(dist) if a},
    }
    if code.n == 36 and sd:
        ne = near_extremal_check(code, dist)
        rep["near_extremal"] = ne.near_extremal
        if ne.near_extremal:
            words = words_of_weight(code, 9)
            des = weight9_design(code, ne.alpha, words)
            rep["alpha"] = ne.alpha
            rep["kissing_number"] = ne.alpha + 72
            rep["design_lambda"] = des.lam
            rep["design_blocks"] = len(des.blocks)
            rep["generated_by_weight9"] = generated_by(code, words)
            cert = canonical_label_graph(equivalence_graph(code, words), 2000000)
            rep["graph_certificate"] = cert.digest
    return rep
