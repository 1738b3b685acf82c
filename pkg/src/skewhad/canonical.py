"""Canonical form of skew matrices under signed simultaneous permutation.

The vector v(H) lists the strict upper triangle column by column,
(h12, h13, h23, h14, ...).  Entries are encoded +1 -> 0, -1 -> 1 and the
canonical representative is the one whose v is lexicographically least.
A least v always has row 1 equal to all +1 (column signs can fix any
offending entry without touching earlier columns), so v is encoded as one
integer per column j >= 2 over rows 2..j-1, row 2 most significant.
"""

import numpy as np

from . import kernels
from .matrix import SignMatrix, SignedPermutation, as_matrix, is_skew_pattern, profile_key, skew_profile


class CanonBudgetExceeded(RuntimeError):
    pass


def sh_vector(m):
    """Upper-triangle 0/1 vector in column-major order (length n(n-1)/2)."""
    m = as_matrix(m)
    n = m.n
    for i in range(n):
        if (m.rows[i] >> i) & 1:
            raise ValueError(f"diagonal entry {i} is -1")
    out = np.zeros(n * (n - 1) // 2, dtype=np.uint8)
    k = 0
    for j in range(1, n):
        for i in range(j):
            out[k] = (m.rows[i] >> j) & 1
            k += 1
    return out


def from_sh_vector(v, n):
    """Rebuild the skew matrix whose v is ``v``."""
    v = np.asarray(v)
    if len(v) != n * (n - 1) // 2:
        raise ValueError("vector length does not match order")
    rows = [0] * n
    k = 0
    for j in range(1, n):
        for i in range(j):
            if v[k]:
                rows[i] |= 1 << j
            else:
                rows[j] |= 1 << i
            k += 1
    return SignMatrix(n, tuple(rows))


def column_codes(m, k=None):
    """The packed column encoding of v restricted to the leading k x k block."""
    m = as_matrix(m)
    k = m.n if k is None else k
    cols = [0] * k
    for j in range(1, k):
        val = 0
        for a in range(1, j):
            val = (val << 1) | ((m.rows[a] >> j) & 1)
        cols[j] = val
    return cols


def matrix_from_codes(cols, k):
    """Skew k x k block (row 1 all +1) with the given column codes."""
    rows = [0] * k
    for j in range(1, k):
        for a in range(1, j):
            if (cols[j] >> (j - 1 - a)) & 1:
                rows[a] |= 1 << j
            else:
                rows[j] |= 1 << a
        rows[j] |= 1  # h[j, 0] = -1 since row 1 is all +1
    return SignMatrix(k, tuple(rows))


def _canon(m, k=None, ncols=None, node_budget=0):
    m = as_matrix(m)
    k = m.n if k is None else k
    ncols = k if ncols is None else ncols
    res = kernels.canon_form(m.rows[:k], k, ncols, node_budget)
    if res is None:
        raise CanonBudgetExceeded(f"canonical search exceeded {node_budget} nodes")
    return res


def canon_codes(m, k=None, node_budget=0):
    """Column codes of the canonical form of the leading k x k block."""
    return list(_canon(m, k, node_budget=node_budget)[0])


def canon_hex(m, node_budget=0):
    """Hex string of the canonical v, the census key."""
    m = as_matrix(m)
    v = sh_vector(matrix_from_codes(canon_codes(m, node_budget=node_budget), m.n))
    return np.packbits(v).tobytes().hex()


def sh_canonical_form(m, node_budget=0):
    """Return (canonical matrix, P) with apply_signed_similarity(m, P) == canonical."""
    m = as_matrix(m)
    if not is_skew_pattern(m):
        raise ValueError("input is not skew")
    cols, order, signs, _, _ = _canon(m, node_budget=node_budget)
    perm = SignedPermutation(tuple(order), tuple(-1 if (signs >> a) & 1 else 1 for a in range(m.n)))
    return matrix_from_codes(cols, m.n), perm


def is_sh_canonical(m, k=None):
    """True iff the leading k x k block equals its own canonical form."""
    m = as_matrix(m)
    k = m.n if k is None else k
    if m.rows[0] & ((1 << k) - 1):
        return False
    return column_codes(m, k) == canon_codes(m, k)


def sh_equivalent(a, b):
    a, b = as_matrix(a), as_matrix(b)
    if a.n != b.n:
        return False
    if profile_key(skew_profile(a, check=False)) != profile_key(skew_profile(b, check=False)):
        return False
    return canon_codes(a) == canon_codes(b)


def partial_key(rows, k, n, node_budget=0):
    """Invariant of a k x n partial skew matrix under signed permutations fixing rows 1..k.

    Equal keys mean the two partial matrices are equivalent.
    """
    m = SignMatrix(n, tuple(rows))
    cols, _, _, sec, _ = _canon(m, k, n, node_budget)
    return (tuple(cols), tuple(sec))


def leading_block(m, k):
    m = as_matrix(m)
    mask = (1 << k) - 1
    return SignMatrix(k, tuple(r & mask for r in m.rows[:k]))
