"""Bit-packed +-1 matrices and the quadruple type calculus for skew Hadamard matrices.

Row ``i`` is stored as an int whose bit ``j`` is set iff entry (i, j) is -1.
Inner products are ``n - 2 * popcount(x ^ y)``.
"""

from dataclasses import dataclass
from itertools import combinations
from math import comb

import numpy as np

from . import kernels


class NotSkewError(ValueError):
    """The type machinery was applied outside its domain."""


@dataclass(frozen=True)
class SignMatrix:
    n: int
    rows: tuple

    @classmethod
    def from_array(cls, a):
        a = np.asarray(a)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ValueError(f"expected a square matrix, got shape {a.shape}")
        if not np.all(np.abs(a) == 1):
            raise ValueError("entries must be +1 or -1")
        weights = 1 << np.arange(a.shape[1], dtype=object)
        rows = tuple(int(((a[i] < 0).astype(object) * weights).sum()) for i in range(a.shape[0]))
        return cls(a.shape[0], rows)

    @classmethod
    def from_rows(cls, rows, n=None):
        rows = tuple(int(r) for r in rows)
        return cls(len(rows) if n is None else n, rows)

    def to_array(self):
        n = self.n
        bits = np.array([[(r >> j) & 1 for j in range(n)] for r in self.rows], dtype=np.int8)
        return (1 - 2 * bits).astype(np.int8)

    def entry(self, i, j):
        return -1 if (self.rows[i] >> j) & 1 else 1

    def transpose(self):
        n = self.n
        cols = []
        for j in range(n):
            c = 0
            for i in range(n):
                c |= ((self.rows[i] >> j) & 1) << i
            cols.append(c)
        return SignMatrix(n, tuple(cols))

    def __str__(self):
        return "\n".join("".join("-" if (r >> j) & 1 else "+" for j in range(self.n)) for r in self.rows)


def as_matrix(m):
    if isinstance(m, SignMatrix):
        return m
    return SignMatrix.from_array(m)


def dot(x, y, n):
    return n - 2 * (x ^ y).bit_count()


def is_skew_pattern(m):
    m = as_matrix(m)
    for i in range(m.n):
        if (m.rows[i] >> i) & 1:
            return False
        for j in range(i + 1, m.n):
            if ((m.rows[i] >> j) & 1) == ((m.rows[j] >> i) & 1):
                return False
    return True


def validate(m):
    """Return {"hadamard": bool, "skew": bool}."""
    m = as_matrix(m)
    n = m.n
    had = all(dot(m.rows[i], m.rows[j], n) == 0 for i, j in combinations(range(n), 2))
    return {"hadamard": had, "skew": had and is_skew_pattern(m)}


def _require_skew(m):
    m = as_matrix(m)
    if m.n < 4:
        raise NotSkewError(f"type machinery needs order >= 4, got {m.n}")
    if not validate(m)["skew"]:
        raise NotSkewError("matrix is not skew Hadamard")
    return m


@dataclass(frozen=True)
class QuadStats:
    P: int
    Q: int
    t: int
    skew: tuple


def epsilon(P, Q):
    if P * Q < 0:
        return 0
    if Q == 0:
        return 1
    return 2


def quad_stats(m, q, check=True):
    m = _require_skew(m) if check else as_matrix(m)
    q = sorted(q)
    if len(set(q)) != 4:
        raise ValueError("need four distinct rows")
    n = m.n
    x = m.rows[q[0]] ^ m.rows[q[1]] ^ m.rows[q[2]] ^ m.rows[q[3]]
    mask = sum(1 << i for i in q)
    P = n - 2 * x.bit_count()
    Q = 4 - 2 * (x & mask).bit_count()
    if (n - abs(P)) % 8:
        raise NotSkewError(f"|P| = {abs(P)} is not congruent to n mod 8")
    t = (n - abs(P)) // 8
    return QuadStats(P, Q, t, (t, epsilon(P, Q)))


def skew_profile(m, check=True):
    """Map (t, eps) -> number of row quadruples of that skew type."""
    m = _require_skew(m) if check else as_matrix(m)
    counts, _ = kernels.quad_profile(m.rows, m.n)
    out = {}
    for idx, c in enumerate(counts):
        if c:
            out[(idx // 3, idx % 3)] = c
    return out


def profile_key(profile):
    return tuple(sorted(profile.items()))


def matrix_skew_type(m, check=True):
    prof = skew_profile(m, check)
    t = min(k[0] for k in prof)
    e = min(k[1] for k in prof if k[0] == t)
    return (t, e)


def matrix_type(m):
    return min(k[0] for k in skew_profile(m))


def a_count_formula(n):
    return n * (n - 1) * (n - 2) * (n - 4) // 32


def count_A_quadruples(m, check=True):
    """Quadruples whose 4x4 block is SH-equivalent to J_4, counted directly and cross-checked."""
    m = _require_skew(m) if check else as_matrix(m)
    _, direct = kernels.quad_profile(m.rows, m.n)
    expect = a_count_formula(m.n)
    if direct != expect:
        raise AssertionError(f"Q=0 count {direct} differs from closed form {expect}")
    return direct


def admissible(n, st):
    t, e = st
    if e not in (0, 1, 2) or t < 0:
        return False
    if t == 0 and e in (0, 1):
        return False
    return 8 * t <= n


def transpose_skew_type(n, st):
    if not admissible(n, st):
        raise ValueError(f"skew type {st} is not admissible for order {n}")
    t, e = st
    if e == 0:
        return (t - 1, 2)
    if e == 1:
        return (t, 1)
    s = t
    if 8 * s == n:
        return (s - 1, 2)
    if 8 * s == n - 4:
        return (s, 2)
    if 8 * s == n - 8:
        return (s + 1, 2)
    return (s + 1, 0)


def kappa_identity(m, triple):
    """kappa[t] = number of other rows r making {triple, r} a quadruple of type t."""
    m = as_matrix(m)
    n = m.n
    if n % 4:
        raise NotSkewError("order must be a multiple of 4")
    mm = n // 4
    a, b, c = triple
    x = m.rows[a] ^ m.rows[b] ^ m.rows[c]
    kappa = [0] * (mm // 2 + 1)
    for r in range(n):
        if r in (a, b, c):
            continue
        P = n - 2 * (x ^ m.rows[r]).bit_count()
        if (n - abs(P)) % 8:
            raise AssertionError("type congruence violated")
        kappa[(n - abs(P)) // 8] += 1
    lhs = sum(k * (mm - 2 * t) ** 2 for t, k in enumerate(kappa))
    if lhs != mm * mm:
        raise AssertionError(f"kappa identity fails: {lhs} != {mm * mm}")
    return kappa


# ------------------------------------------------------- signed permutations

@dataclass(frozen=True)
class SignedPermutation:
    """Row a of the result is row image[a] of the input, scaled by signs[a]."""

    image: tuple
    signs: tuple

    @classmethod
    def identity(cls, n):
        return cls(tuple(range(n)), (1,) * n)

    @classmethod
    def random(cls, n, rng):
        return cls(tuple(int(v) for v in rng.permutation(n)),
                   tuple(int(v) for v in rng.choice([-1, 1], size=n)))

    def __post_init__(self):
        if sorted(self.image) != list(range(len(self.image))):
            raise ValueError("image is not a permutation")
        if len(self.signs) != len(self.image) or any(s not in (1, -1) for s in self.signs):
            raise ValueError("signs must be +-1, one per point")

    def compose(self, other):
        """Apply self first, then other: act(act(H, self), other) == act(H, self.compose(other))."""
        img = tuple(self.image[q] for q in other.image)
        sg = tuple(other.signs[a] * self.signs[q] for a, q in enumerate(other.image))
        return SignedPermutation(img, sg)

    def inverse(self):
        n = len(self.image)
        img = [0] * n
        sg = [1] * n
        for a, p in enumerate(self.image):
            img[p] = a
            sg[p] = self.signs[a]
        return SignedPermutation(tuple(img), tuple(sg))

    def matrix(self):
        """The signed permutation matrix P with act(H) == P^T H P."""
        n = len(self.image)
        P = np.zeros((n, n), dtype=np.int64)
        for a, p in enumerate(self.image):
            P[p, a] = self.signs[a]
        return P


def apply_signed_similarity(m, perm):
    """Entry (a, b) of the result is s_a s_b h[p_a, p_b]."""
    m = as_matrix(m)
    n = m.n
    if len(perm.image) != n:
        raise ValueError(f"order mismatch: {n} vs {len(perm.image)}")
    neg = 0
    for a, s in enumerate(perm.signs):
        if s < 0:
            neg |= 1 << a
    out = []
    for a in range(n):
        src = m.rows[perm.image[a]]
        r = 0
        for b in range(n):
            if (src >> perm.image[b]) & 1:
                r |= 1 << b
        r ^= neg
        if (neg >> a) & 1:
            r ^= (1 << n) - 1
        out.append(r)
    return SignMatrix(n, tuple(out))


def total_quadruples(n):
    return comb(n, 4)
