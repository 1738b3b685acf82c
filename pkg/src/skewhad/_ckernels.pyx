# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled kernels.

Rows are 64-bit words; bit ``j`` of row ``i`` is set iff ``h[i, j] == -1``.
Every function here has a pure-Python twin in ``_pykernels`` with the same
signature and results; ``skewhad.kernels`` picks one at import time.
"""

from libc.stdint cimport uint64_t, int64_t
from libc.stdlib cimport malloc, free, calloc
from libc.string cimport memset

cdef extern from *:
    int popcount64 "__builtin_popcountll"(unsigned long long) nogil
    int ctz64 "__builtin_ctzll"(unsigned long long) nogil

DEF MAXN = 64
DEF BIG = 1000000


cdef inline uint64_t bit(int j) nogil:
    return (<uint64_t>1) << j


cdef inline uint64_t full_mask(int n) nogil:
    if n >= 64:
        return <uint64_t>0xFFFFFFFFFFFFFFFF
    return (bit(n)) - 1


cdef int load_rows(object rows, uint64_t* out) except -1:
    cdef int i = 0
    for r in rows:
        out[i] = <uint64_t>r
        i += 1
    return i


# ---------------------------------------------------------------- quadruples

def quad_profile(rows, int n):
    """Return (counts, zero_q) over all 4-row subsets.

    ``counts[3*t + eps]`` is the number of quadruples of skew type (t, eps);
    ``zero_q`` is the number of quadruples with Q == 0.
    """
    cdef uint64_t r[MAXN]
    cdef int a, b, c, d, P, Q, t, e, absP
    cdef uint64_t xab, xabc, x, m
    cdef int64_t zero_q = 0
    load_rows(rows, r)
    cdef int tmax = n // 8
    counts = [0] * (3 * (tmax + 1))
    cdef int64_t* cnt = <int64_t*>calloc(3 * (tmax + 1), sizeof(int64_t))
    try:
        for a in range(n):
            for b in range(a + 1, n):
                xab = r[a] ^ r[b]
                for c in range(b + 1, n):
                    xabc = xab ^ r[c]
                    for d in range(c + 1, n):
                        x = xabc ^ r[d]
                        P = n - 2 * popcount64(x)
                        m = bit(a) | bit(b) | bit(c) | bit(d)
                        Q = 4 - 2 * popcount64(x & m)
                        absP = P if P >= 0 else -P
                        if (n - absP) % 8 != 0:
                            raise ValueError("rows %d,%d,%d,%d violate the type congruence" % (a, b, c, d))
                        t = (n - absP) // 8
                        if P * Q < 0:
                            e = 0
                        elif Q == 0:
                            e = 1
                            zero_q += 1
                        else:
                            e = 2
                        cnt[3 * t + e] += 1
        for a in range(3 * (tmax + 1)):
            counts[a] = cnt[a]
    finally:
        free(cnt)
    return counts, zero_q


# ----------------------------------------------------------- canonical form

cdef struct CanonState:
    int m              # order of the block being canonicalised
    int ncols          # total columns (secondary key uses columns m..ncols-1)
    int use_secondary
    uint64_t nb[MAXN]  # rows normalised by the current root
    uint64_t raw[MAXN]
    uint64_t dmask
    int order[MAXN]
    uint64_t cur[MAXN]
    uint64_t best[MAXN]
    int best_order[MAXN]
    uint64_t best_dmask
    uint64_t sec_cur[MAXN]
    uint64_t sec_best[MAXN]
    int have_best
    int lt_level
    int64_t leaves
    int64_t equal_leaves
    int64_t nodes
    int64_t node_budget
    int aborted


cdef void sort_u64(uint64_t* a, int k) nogil:
    cdef int i, j
    cdef uint64_t v
    for i in range(1, k):
        v = a[i]
        j = i - 1
        while j >= 0 and a[j] > v:
            a[j + 1] = a[j]
            j -= 1
        a[j + 1] = v


cdef void secondary_key(CanonState* s) nogil:
    # right-hand columns, rows reordered/resigned, each column sign-normalised, sorted
    cdef int c, a, p, k = s.m
    cdef uint64_t v, b
    for c in range(s.m, s.ncols):
        v = 0
        for a in range(k):
            p = s.order[a]
            b = ((s.raw[p] >> c) & 1) ^ ((s.dmask >> p) & 1)
            v = (v << 1) | b
        if (v >> (k - 1)) & 1:
            v = (~v) & full_mask(k)
        s.sec_cur[c - s.m] = v
    sort_u64(s.sec_cur, s.ncols - s.m)


cdef int cmp_seq(uint64_t* a, uint64_t* b, int k) nogil:
    cdef int i
    for i in range(k):
        if a[i] < b[i]:
            return -1
        if a[i] > b[i]:
            return 1
    return 0


cdef void take_best(CanonState* s) nogil:
    cdef int i
    for i in range(s.m):
        s.best[i] = s.cur[i]
        s.best_order[i] = s.order[i]
    s.best_dmask = s.dmask
    if s.use_secondary:
        for i in range(s.ncols - s.m):
            s.sec_best[i] = s.sec_cur[i]
    s.have_best = 1


cdef void canon_dfs(CanonState* s, int j, uint64_t remaining) nogil:
    cdef uint64_t C, z, val, rest
    cdef int a, u
    if s.aborted:
        return
    s.nodes += 1
    if s.node_budget > 0 and s.nodes > s.node_budget:
        s.aborted = 1
        return
    if remaining == 0:
        s.leaves += 1
        if not s.have_best or s.lt_level < BIG:
            if s.use_secondary:
                secondary_key(s)
            take_best(s)
            s.lt_level = BIG
        else:
            s.equal_leaves += 1
            if s.use_secondary:
                secondary_key(s)
                if cmp_seq(s.sec_cur, s.sec_best, s.ncols - s.m) < 0:
                    take_best(s)
        return
    C = remaining
    val = 0
    for a in range(1, j):
        z = C & ~s.nb[s.order[a]]
        val <<= 1
        if z:
            C = z
        else:
            val |= 1
    if s.have_best and s.lt_level >= BIG:
        if val > s.best[j]:
            return
        if val < s.best[j]:
            s.lt_level = j
    s.cur[j] = val
    rest = C
    while rest:
        u = ctz64(rest)
        rest &= rest - 1
        s.order[j] = u
        canon_dfs(s, j + 1, remaining & ~bit(u))
        if s.aborted:
            return


cdef int run_canon(CanonState* s, int roots_from, int roots_to) nogil:
    cdef int r, i
    cdef uint64_t fm = full_mask(s.m)
    for r in range(roots_from, roots_to):
        s.dmask = s.raw[r] & fm & ~bit(r)
        for i in range(s.m):
            s.nb[i] = (s.raw[i] ^ s.dmask) & fm
            if (s.dmask >> i) & 1:
                s.nb[i] = (~s.nb[i]) & fm
        s.order[0] = r
        s.cur[0] = 0
        s.lt_level = BIG if s.have_best else -1
        canon_dfs(s, 1, fm & ~bit(r))
        if s.aborted:
            return 0
    return 1


def canon_form(rows, int m, int ncols=-1, int64_t node_budget=0):
    """Lexicographically least upper-triangle vector over signed relabelings.

    ``rows`` describe an m x ncols array whose leading m x m block has a +1
    diagonal and is skew off the diagonal.  With ``ncols > m`` the remaining
    columns act as a tie-break (sorted, sign-normalised), which canonicalises
    a partial matrix under the signed permutations fixing its row set.

    Returns (cols, order, signs_mask, secondary, stats) or None when the node
    budget is exhausted.
    """
    cdef CanonState* s = <CanonState*>malloc(sizeof(CanonState))
    cdef int i, ok
    if ncols < 0:
        ncols = m
    try:
        memset(s, 0, sizeof(CanonState))
        s.m = m
        s.ncols = ncols
        s.use_secondary = 1 if ncols > m else 0
        s.node_budget = node_budget
        load_rows(rows, s.raw)
        with nogil:
            ok = run_canon(s, 0, m)
        if not ok:
            return None
        cols = [s.best[i] for i in range(m)]
        order = [s.best_order[i] for i in range(m)]
        signs = 0
        for i in range(m):
            if (s.best_dmask >> s.best_order[i]) & 1:
                signs |= 1 << i
        sec = [s.sec_best[i] for i in range(ncols - m)] if s.use_secondary else []
        stats = {"nodes": s.nodes, "leaves": s.leaves, "equal_leaves": s.equal_leaves}
        return cols, order, signs, sec, stats
    finally:
        free(s)


# ------------------------------------------------------- transitive chains

cdef int chain_rec(uint64_t* nb, uint64_t cand, int depth, int best, uint64_t* path, int* bestpath) nogil:
    cdef uint64_t rest = cand, nxt
    cdef int u, got, i
    if depth + popcount64(cand) <= best:
        return best
    if cand == 0:
        return depth
    while rest:
        if depth + popcount64(rest) <= best:
            break
        u = ctz64(rest)
        rest &= rest - 1
        nxt = cand & ~nb[u] & ~bit(u)
        path[depth] = u
        got = chain_rec(nb, nxt, depth + 1, best, path, bestpath)
        if got > best:
            best = got
            if bestpath != NULL:
                for i in range(depth + 1):
                    bestpath[i] = <int>path[i]
    return best


def max_transitive_chain(rows, int n):
    """Largest k with J_k as a signed principal submatrix; returns (k, indices)."""
    cdef uint64_t raw[MAXN]
    cdef uint64_t nb[MAXN]
    cdef uint64_t path[MAXN]
    cdef int bestpath[MAXN]
    cdef int tmp[MAXN]
    cdef int r, i, best = 0, got
    cdef uint64_t fm = full_mask(n), dmask
    load_rows(rows, raw)
    witness = []
    for r in range(n):
        dmask = raw[r] & fm & ~bit(r)
        for i in range(n):
            nb[i] = (raw[i] ^ dmask) & fm
            if (dmask >> i) & 1:
                nb[i] = (~nb[i]) & fm
        path[0] = r
        got = chain_rec(nb, fm & ~bit(r), 1, best, path, tmp)
        if got > best:
            best = got
            witness = [tmp[i] for i in range(best)]
            witness[0] = r
    return best, witness


# ------------------------------------------------------------------ GF(3)

cdef inline void gf3_add(uint64_t a1, uint64_t a2, uint64_t b1, uint64_t b2,
                         uint64_t* r1, uint64_t* r2) nogil:
    # planes: x1 marks value 1, x2 marks value 2
    cdef uint64_t a0 = ~(a1 | a2)
    cdef uint64_t b0 = ~(b1 | b2)
    r1[0] = (a1 & b0) | (a0 & b1) | (a2 & b2)
    r2[0] = (a2 & b0) | (a0 & b2) | (a1 & b1)


def gf3_weight_distribution(gen1, gen2, int n, base1=0, base2=0):
    """Weight distribution of ``base + span(gens)`` via a modular ternary Gray code.

    Step m adds generator v(m), the 3-adic valuation of m, once.
    """
    cdef int k = len(gen1)
    cdef uint64_t g1[MAXN]
    cdef uint64_t g2[MAXN]
    cdef uint64_t c1 = <uint64_t>base1, c2 = <uint64_t>base2, t1, t2
    cdef int64_t* dist = <int64_t*>calloc(n + 1, sizeof(int64_t))
    cdef int64_t total = 1, m, mm
    cdef int v, i
    load_rows(gen1, g1)
    load_rows(gen2, g2)
    for i in range(k):
        total *= 3
    try:
        with nogil:
            dist[popcount64(c1 | c2)] += 1
            for m in range(1, total):
                mm = m
                v = 0
                while mm % 3 == 0:
                    mm //= 3
                    v += 1
                gf3_add(c1, c2, g1[v], g2[v], &t1, &t2)
                c1 = t1
                c2 = t2
                dist[popcount64(c1 | c2)] += 1
        return [dist[i] for i in range(n + 1)]
    finally:
        free(dist)


def gf3_words_of_weight(gen1, gen2, int n, int weight):
    """All codewords of the given weight, as (plane1, plane2) pairs, Gray order."""
    cdef int k = len(gen1)
    cdef uint64_t g1[MAXN]
    cdef uint64_t g2[MAXN]
    cdef uint64_t c1 = 0, c2 = 0, t1, t2
    cdef int64_t total = 1, m, mm
    cdef int v, i
    load_rows(gen1, g1)
    load_rows(gen2, g2)
    for i in range(k):
        total *= 3
    out = []
    if weight == 0:
        out.append((0, 0))
    for m in range(1, total):
        mm = m
        v = 0
        while mm % 3 == 0:
            mm //= 3
            v += 1
        gf3_add(c1, c2, g1[v], g2[v], &t1, &t2)
        c1 = t1
        c2 = t2
        if popcount64(c1 | c2) == weight:
            out.append((c1, c2))
    return out


# ------------------------------------------------------------ row search

DEF MAXTRI = 42000   # C(64, 3)


cdef class RowSearch:
    """Row-by-row backtracking for skew Hadamard completions.

    Rows 0..k-1 of the start state are taken as fixed.  Row ``i`` has its
    entries left of the diagonal fixed by skewness; the free entries are
    grouped into blocks of consecutive same-segment columns on which all
    earlier rows agree, and inside a block the -1 entries are packed to the
    right.  See ``skewhad.search`` for the symmetry argument.
    """
    cdef int n
    cdef int seg[MAXN]
    cdef int forced
    cdef uint64_t forced_group
    cdef int forced_parity
    cdef int target_t, target_e
    cdef uint64_t rows[MAXN]
    cdef uint64_t* trix
    cdef uint64_t* trim
    cdef int tricount[MAXN + 1]
    cdef int target_depth
    cdef int64_t limit
    cdef int64_t nodes
    cdef int64_t node_budget
    cdef int stop
    cdef int exhausted
    cdef list out
    # per-row scratch
    cdef int* R          # [row][blocklevel][q]
    cdef int* blk_lo     # [row][b]
    cdef int* blk_size
    cdef uint64_t* blk_a  # [row][b] bitmask over q of the constant row-q bit
    cdef int nblk[MAXN]
    cdef int rem[MAXN][MAXN + 1]

    def __cinit__(self, int n, segments, int forced=-1, uint64_t forced_group=0,
                  int target_t=-1, int target_e=-1):
        cdef int j
        self.n = n
        for j in range(n):
            self.seg[j] = segments[j]
        self.forced = forced
        self.forced_group = forced_group
        self.forced_parity = (n // 4) & 1
        self.target_t = target_t
        self.target_e = target_e
        self.trix = <uint64_t*>malloc(MAXTRI * sizeof(uint64_t))
        self.trim = <uint64_t*>malloc(MAXTRI * sizeof(uint64_t))
        self.R = <int*>malloc(MAXN * (MAXN + 1) * MAXN * sizeof(int))
        self.blk_lo = <int*>malloc(MAXN * MAXN * sizeof(int))
        self.blk_size = <int*>malloc(MAXN * MAXN * sizeof(int))
        self.blk_a = <uint64_t*>malloc(MAXN * MAXN * sizeof(uint64_t))
        self.node_budget = 0

    def __dealloc__(self):
        free(self.trix)
        free(self.trim)
        free(self.R)
        free(self.blk_lo)
        free(self.blk_size)
        free(self.blk_a)

    cdef inline int* Rp(self, int i, int b):
        return self.R + (i * (MAXN + 1) + b) * MAXN

    cdef int skew_ok(self, int i, uint64_t row):
        cdef int k, P, Q, absP, t, e
        cdef uint64_t x
        cdef int n = self.n
        if self.target_t < 0:
            return 1
        for k in range(self.tricount[i]):
            x = self.trix[k] ^ row
            P = n - 2 * popcount64(x)
            Q = 4 - 2 * popcount64(x & (self.trim[k] | bit(i)))
            absP = P if P >= 0 else -P
            t = (n - absP) >> 3
            if t < self.target_t:
                return 0
            if t == self.target_t:
                if P * Q < 0:
                    e = 0
                elif Q == 0:
                    e = 1
                else:
                    e = 2
                if e < self.target_e:
                    return 0
        return 1

    cdef void push_triples(self, int i):
        cdef int a, b, k = self.tricount[i]
        cdef uint64_t ri = self.rows[i]
        for a in range(i):
            for b in range(a + 1, i):
                self.trix[k] = self.rows[a] ^ self.rows[b] ^ ri
                self.trim[k] = bit(a) | bit(b) | bit(i)
                k += 1
        self.tricount[i + 1] = k

    cdef int order_ok(self, int i, uint64_t row):
        # tied same-segment neighbours (j, j+1), j > i: need bit j <= bit j+1
        cdef int q, j
        cdef uint64_t untied = 0
        for q in range(i):
            untied |= self.rows[q] ^ (self.rows[q] >> 1)
        for j in range(i + 1, self.n - 1):
            if self.seg[j] != self.seg[j + 1] or (untied >> j) & 1:
                continue
            if ((row >> j) & 1) and not ((row >> (j + 1)) & 1):
                return 0
        return 1

    cdef int ortho_ok(self, int i, uint64_t row):
        cdef int q
        cdef int half = self.n // 2
        for q in range(i):
            if popcount64(row ^ self.rows[q]) != half:
                return 0
        return 1

    cdef uint64_t det_part(self, int i):
        cdef int j
        cdef uint64_t row = 0
        for j in range(i):
            if not ((self.rows[j] >> i) & 1):
                row |= bit(j)
        return row

    cdef int accept(self, int i, uint64_t row) except -1:
        if not self.skew_ok(i, row):
            return 0
        self.rows[i] = row
        self.push_triples(i)
        self.descend(i + 1)
        return 0

    cdef int descend(self, int i) except -1:
        cdef int j, k
        cdef uint64_t row
        if self.stop:
            return 0
        self.nodes += 1
        if self.node_budget > 0 and self.nodes > self.node_budget:
            self.stop = 1
            self.exhausted = 1
            return 0
        if i == self.target_depth:
            self.out.append(tuple([self.rows[k] for k in range(i)]))
            if self.limit > 0 and len(self.out) >= self.limit:
                self.stop = 1
            return 0
        if i == self.forced:
            row = self.forced_row(i)
            if self.ortho_ok(i, row) and self.order_ok(i, row):
                self.accept(i, row)
            return 0
        self.setup_blocks(i)
        self.block_rec(i, 0, self.det_part(i))
        return 0

    cdef uint64_t forced_row(self, int i):
        # entry (c, i) of each later row c follows from the parity of its
        # -1 entries over the forced group; skewness turns that into row i
        cdef int c, j
        cdef uint64_t row = self.det_part(i)
        cdef int par
        for c in range(i + 1, self.n):
            par = self.forced_parity
            for j in range(self.n):
                if (self.forced_group >> j) & 1:
                    # h[c, j] = -h[j, c] for j < c
                    par ^= 1 ^ ((self.rows[j] >> c) & 1)
            # par is now bit(c, i); row i gets the opposite sign
            if not par:
                row |= bit(c)
        return row

    cdef void setup_blocks(self, int i):
        cdef int n = self.n, q, j, b = -1, size
        cdef uint64_t untied = 0
        cdef uint64_t a
        cdef int* base
        for q in range(i):
            untied |= self.rows[q] ^ (self.rows[q] >> 1)
        for j in range(i + 1, n):
            if b >= 0 and self.seg[j] == self.seg[j - 1] and j - 1 >= i + 1 and not ((untied >> (j - 1)) & 1):
                self.blk_size[i * MAXN + b] += 1
            else:
                b += 1
                self.blk_lo[i * MAXN + b] = j
                self.blk_size[i * MAXN + b] = 1
                a = 0
                for q in range(i):
                    if (self.rows[q] >> j) & 1:
                        a |= bit(q)
                self.blk_a[i * MAXN + b] = a
        self.nblk[i] = b + 1
        size = 0
        self.rem[i][b + 1] = 0
        for j in range(b, -1, -1):
            size += self.blk_size[i * MAXN + j]
            self.rem[i][j] = size
        # initial remaining mismatch targets
        base = self.Rp(i, 0)
        cdef uint64_t det = self.det_part(i)
        cdef uint64_t low = full_mask(i + 1)
        for q in range(i):
            base[q] = n // 2 - popcount64((det ^ self.rows[q]) & low)

    cdef int block_rec(self, int i, int b, uint64_t cur) except -1:
        cdef int q, c, cmin, cmax, lo, hi, size, after, r, contrib
        cdef int* Rin
        cdef int* Rout
        cdef uint64_t a, ones
        if self.stop:
            return 0
        if b == self.nblk[i]:
            Rin = self.Rp(i, b)
            for q in range(i):
                if Rin[q] != 0:
                    return 0
            self.accept(i, cur)
            return 0
        size = self.blk_size[i * MAXN + b]
        after = self.rem[i][b + 1]
        a = self.blk_a[i * MAXN + b]
        Rin = self.Rp(i, b)
        cmin = 0
        cmax = size
        for q in range(i):
            r = Rin[q]
            if (a >> q) & 1:
                # contrib = size - c in [r - after, r]
                lo = size - r
                hi = size - r + after
            else:
                lo = r - after
                hi = r
            if lo > cmin:
                cmin = lo
            if hi < cmax:
                cmax = hi
            if cmin > cmax:
                return 0
        Rout = self.Rp(i, b + 1)
        lo = self.blk_lo[i * MAXN + b]
        for c in range(cmin, cmax + 1):
            for q in range(i):
                if (a >> q) & 1:
                    Rout[q] = Rin[q] - (size - c)
                else:
                    Rout[q] = Rin[q] - c
            # -1 entries packed at the right end of the block
            ones = 0
            if c > 0:
                ones = ((bit(c) - 1) << (lo + size - c))
            self.block_rec(i, b + 1, cur | ones)
            if self.stop:
                return 0
        return 0

    def run(self, start_rows, int target_depth, int64_t limit=0, int64_t node_budget=0):
        """Extend ``start_rows`` to every admissible state with ``target_depth`` rows.

        Returns (states, exhausted, nodes).
        """
        cdef int k = 0, i
        for r in start_rows:
            self.rows[k] = <uint64_t>r
            k += 1
        self.tricount[0] = 0
        for i in range(k):
            self.push_triples(i)
        self.out = []
        self.target_depth = target_depth
        self.limit = limit
        self.node_budget = node_budget
        self.nodes = 0
        self.stop = 0
        self.exhausted = 0
        self.descend(k)
        return self.out, bool(self.exhausted), self.nodes
