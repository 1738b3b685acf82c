"""Pure-Python kernels, same signatures and results as the compiled module."""

def _pop(x):
    return x.bit_count()


def _full(n):
    return (1 << n) - 1


# ---------------------------------------------------------------- quadruples

def quad_profile(rows, n):
    r = list(rows)
    tmax = n // 8
    cnt = [0] * (3 * (tmax + 1))
    zero_q = 0
    for a in range(n):
        for b in range(a + 1, n):
            xab = r[a] ^ r[b]
            for c in range(b + 1, n):
                xabc = xab ^ r[c]
                mabc = (1 << a) | (1 << b) | (1 << c)
                for d in range(c + 1, n):
                    x = xabc ^ r[d]
                    P = n - 2 * _pop(x)
                    Q = 4 - 2 * _pop(x & (mabc | (1 << d)))
                    if (n - abs(P)) % 8:
                        raise ValueError(f"rows {a},{b},{c},{d} violate the type congruence")
                    t = (n - abs(P)) // 8
                    if P * Q < 0:
                        e = 0
                    elif Q == 0:
                        e = 1
                        zero_q += 1
                    else:
                        e = 2
                    cnt[3 * t + e] += 1
    return cnt, zero_q


# ----------------------------------------------------------- canonical form

class _Canon:
    def __init__(self, raw, m, ncols, node_budget):
        self.raw = raw
        self.m = m
        self.ncols = ncols
        self.secondary = ncols > m
        self.node_budget = node_budget
        self.nodes = 0
        self.leaves = 0
        self.equal_leaves = 0
        self.best = None
        self.best_order = None
        self.best_dmask = 0
        self.sec_best = []
        self.lt = -1
        self.aborted = False

    def sec_key(self, order, dmask):
        k = self.m
        full = _full(k)
        out = []
        for c in range(self.m, self.ncols):
            v = 0
            for p in order:
                v = (v << 1) | (((self.raw[p] >> c) & 1) ^ ((dmask >> p) & 1))
            if (v >> (k - 1)) & 1:
                v = ~v & full
            out.append(v)
        out.sort()
        return out

    def take(self, cur, order, dmask, sec):
        self.best = list(cur)
        self.best_order = list(order)
        self.best_dmask = dmask
        self.sec_best = sec
        self.lt = None  # equal to best

    def dfs(self, nb, cur, order, j, remaining, dmask):
        if self.aborted:
            return
        self.nodes += 1
        if self.node_budget and self.nodes > self.node_budget:
            self.aborted = True
            return
        if not remaining:
            self.leaves += 1
            sec = self.sec_key(order, dmask) if self.secondary else []
            if self.best is None or self.lt is not None:
                self.take(cur, order, dmask, sec)
            else:
                self.equal_leaves += 1
                if self.secondary and sec < self.sec_best:
                    self.take(cur, order, dmask, sec)
            return
        C = remaining
        val = 0
        for a in range(1, j):
            z = C & ~nb[order[a]]
            val <<= 1
            if z:
                C = z
            else:
                val |= 1
        if self.best is not None and self.lt is None:
            if val > self.best[j]:
                return
            if val < self.best[j]:
                self.lt = j
        cur[j] = val
        rest = C
        while rest:
            low = rest & -rest
            u = low.bit_length() - 1
            rest ^= low
            order[j] = u
            self.dfs(nb, cur, order, j + 1, remaining & ~low, dmask)
            if self.aborted:
                return

    def run(self):
        m = self.m
        fm = _full(m)
        for r in range(m):
            dmask = self.raw[r] & fm & ~(1 << r)
            nb = []
            for i in range(m):
                v = (self.raw[i] ^ dmask) & fm
                if (dmask >> i) & 1:
                    v = ~v & fm
                nb.append(v)
            cur = [0] * m
            order = [0] * m
            order[0] = r
            self.lt = None if self.best is not None else -1
            self.dfs(nb, cur, order, 1, fm & ~(1 << r), dmask)
            if self.aborted:
                return False
        return True


def canon_form(rows, m, ncols=-1, node_budget=0):
    if ncols < 0:
        ncols = m
    st = _Canon(list(rows), m, ncols, node_budget)
    if not st.run():
        return None
    signs = 0
    for i, p in enumerate(st.best_order):
        if (st.best_dmask >> p) & 1:
            signs |= 1 << i
    stats = {"nodes": st.nodes, "leaves": st.leaves, "equal_leaves": st.equal_leaves}
    return st.best, st.best_order, signs, list(st.sec_best), stats


# ------------------------------------------------------- transitive chains

def _chain(nb, cand, depth, best, path, bestpath):
    if depth + _pop(cand) <= best:
        return best
    if not cand:
        return depth
    rest = cand
    while rest:
        if depth + _pop(rest) <= best:
            break
        low = rest & -rest
        u = low.bit_length() - 1
        rest ^= low
        path[depth] = u
        got = _chain(nb, cand & ~nb[u] & ~low, depth + 1, best, path, bestpath)
        if got > best:
            best = got
            bestpath[: depth + 1] = path[: depth + 1]
    return best


def max_transitive_chain(rows, n):
    raw = list(rows)
    fm = _full(n)
    best = 0
    witness = []
    for r in range(n):
        dmask = raw[r] & fm & ~(1 << r)
        nb = []
        for i in range(n):
            v = (raw[i] ^ dmask) & fm
            if (dmask >> i) & 1:
                v = ~v & fm
            nb.append(v)
        path = [0] * (n + 1)
        tmp = [0] * (n + 1)
        path[0] = r
        got = _chain(nb, fm & ~(1 << r), 1, best, path, tmp)
        if got > best:
            best = got
            witness = tmp[:best]
            witness[0] = r
    return best, witness


# ------------------------------------------------------------------ GF(3)

def _gf3_add(a1, a2, b1, b2, full):
    a0 = ~(a1 | a2) & full
    b0 = ~(b1 | b2) & full
    return ((a1 & b0) | (a0 & b1) | (a2 & b2),
            (a2 & b0) | (a0 & b2) | (a1 & b1))


def _gray_steps(k):
    total = 3 ** k
    for m in range(1, total):
        v = 0
        while m % 3 == 0:
            m //= 3
            v += 1
        yield v


def _span_arrays(g1, g2, full):
    # all 3^k combinations of the generators as two uint64 plane arrays
    import numpy as np

    p1 = np.zeros(1, dtype=np.uint64)
    p2 = np.zeros(1, dtype=np.uint64)
    f = np.uint64(full)
    for a, b in zip(g1, g2):
        a, b = np.uint64(a), np.uint64(b)
        parts1, parts2 = [p1], [p2]
        c1, c2 = p1, p2
        for _ in range(2):
            z = ~(c1 | c2) & f
            w = ~(a | b) & f
            c1, c2 = (c1 & w) | (z & a) | (c2 & b), (c2 & w) | (z & b) | (c1 & a)
            parts1.append(c1)
            parts2.append(c2)
        p1 = np.concatenate(parts1)
        p2 = np.concatenate(parts2)
    return p1, p2


def _mitm(gen1, gen2, n, base1, base2, visit):
    import numpy as np

    full = _full(n)
    g1, g2 = list(gen1), list(gen2)
    h = len(g1) // 2
    L1, L2 = _span_arrays(g1[:h], g2[:h], full)
    R1, R2 = _span_arrays(g1[h:], g2[h:], full)
    if base1 or base2:
        b1, b2 = np.uint64(base1), np.uint64(base2)
        z = ~(L1 | L2) & np.uint64(full)
        w = ~(b1 | b2) & np.uint64(full)
        L1, L2 = (L1 & w) | (z & b1) | (L2 & b2), (L2 & w) | (z & b2) | (L1 & b1)
    f = np.uint64(full)
    zr = ~(R1 | R2) & f
    for x1, x2 in zip(L1, L2):
        zx = ~(x1 | x2) & f
        s1 = (x1 & zr) | (zx & R1) | (x2 & R2)
        s2 = (x2 & zr) | (zx & R2) | (x1 & R1)
        visit(s1, s2)


def gf3_weight_distribution(gen1, gen2, n, base1=0, base2=0):
    if len(gen1) > 8:
        import numpy as np

        dist = np.zeros(n + 1, dtype=np.int64)

        def visit(s1, s2):
            dist[:] += np.bincount(np.bitwise_count(s1 | s2), minlength=n + 1)[: n + 1]

        _mitm(gen1, gen2, n, base1, base2, visit)
        return [int(x) for x in dist]
    full = _full(n)
    g1, g2 = list(gen1), list(gen2)
    c1, c2 = base1, base2
    dist = [0] * (n + 1)
    dist[_pop(c1 | c2)] += 1
    for v in _gray_steps(len(g1)):
        c1, c2 = _gf3_add(c1, c2, g1[v], g2[v], full)
        dist[_pop(c1 | c2)] += 1
    return dist


def gf3_words_of_weight(gen1, gen2, n, weight):
    if len(gen1) > 8:
        import numpy as np

        found = []

        def visit(s1, s2):
            sel = np.bitwise_count(s1 | s2) == weight
            if sel.any():
                found.extend(zip(s1[sel].tolist(), s2[sel].tolist()))

        _mitm(gen1, gen2, n, 0, 0, visit)
        return found
    full = _full(n)
    g1, g2 = list(gen1), list(gen2)
    c1 = c2 = 0
    out = [(0, 0)] if weight == 0 else []
    for v in _gray_steps(len(g1)):
        c1, c2 = _gf3_add(c1, c2, g1[v], g2[v], full)
        if _pop(c1 | c2) == weight:
            out.append((c1, c2))
    return out


# ------------------------------------------------------------ row search

class RowSearch:
    """Same search as the compiled version; see there for the layout."""

    def __init__(self, n, segments, forced=-1, forced_group=0, target_t=-1, target_e=-1):
        self.n = n
        self.seg = list(segments)
        self.forced = forced
        self.forced_group = forced_group
        self.forced_parity = (n // 4) & 1
        self.target_t = target_t
        self.target_e = target_e

    def _skew_ok(self, i, row):
        if self.target_t < 0:
            return True
        n, tt, te = self.n, self.target_t, self.target_e
        bi = 1 << i
        for x0, m0 in self.tri:
            x = x0 ^ row
            P = n - 2 * _pop(x)
            t = (n - abs(P)) >> 3
            if t < tt:
                return False
            if t == tt:
                Q = 4 - 2 * _pop(x & (m0 | bi))
                e = 0 if P * Q < 0 else (1 if Q == 0 else 2)
                if e < te:
                    return False
        return True

    def _push(self, i):
        r = self.rows
        ri = r[i]
        bi = 1 << i
        for a in range(i):
            for b in range(a + 1, i):
                self.tri.append((r[a] ^ r[b] ^ ri, (1 << a) | (1 << b) | bi))

    def _det(self, i):
        row = 0
        for j in range(i):
            if not (self.rows[j] >> i) & 1:
                row |= 1 << j
        return row

    def _untied(self, i):
        u = 0
        for q in range(i):
            u |= self.rows[q] ^ (self.rows[q] >> 1)
        return u

    def _order_ok(self, i, row):
        u = self._untied(i)
        seg = self.seg
        for j in range(i + 1, self.n - 1):
            if seg[j] != seg[j + 1] or (u >> j) & 1:
                continue
            if (row >> j) & 1 and not (row >> (j + 1)) & 1:
                return False
        return True

    def _ortho_ok(self, i, row):
        half = self.n // 2
        return all(_pop(row ^ self.rows[q]) == half for q in range(i))

    def _forced_row(self, i):
        row = self._det(i)
        for c in range(i + 1, self.n):
            par = self.forced_parity
            g = self.forced_group
            while g:
                low = g & -g
                j = low.bit_length() - 1
                g ^= low
                par ^= 1 ^ ((self.rows[j] >> c) & 1)
            if not par:
                row |= 1 << c
        return row

    def _accept(self, i, row):
        if not self._skew_ok(i, row):
            return
        self.rows[i] = row
        mark = len(self.tri)
        self._push(i)
        self._descend(i + 1)
        del self.tri[mark:]

    def _descend(self, i):
        if self.stop:
            return
        self.nodes += 1
        if self.node_budget and self.nodes > self.node_budget:
            self.stop = True
            self.exhausted = True
            return
        if i == self.target_depth:
            self.out.append(tuple(self.rows[:i]))
            if self.limit and len(self.out) >= self.limit:
                self.stop = True
            return
        if i == self.forced:
            row = self._forced_row(i)
            if self._ortho_ok(i, row) and self._order_ok(i, row):
                self._accept(i, row)
            return
        n = self.n
        u = self._untied(i)
        blocks = []  # [lo, size, amask]
        for j in range(i + 1, n):
            if blocks and self.seg[j] == self.seg[j - 1] and j - 1 >= i + 1 and not (u >> (j - 1)) & 1:
                blocks[-1][1] += 1
            else:
                a = 0
                for q in range(i):
                    if (self.rows[q] >> j) & 1:
                        a |= 1 << q
                blocks.append([j, 1, a])
        after = [0] * (len(blocks) + 1)
        for b in range(len(blocks) - 1, -1, -1):
            after[b] = after[b + 1] + blocks[b][1]
        det = self._det(i)
        low = _full(i + 1)
        R = [n // 2 - _pop((det ^ self.rows[q]) & low) for q in range(i)]
        self._blocks(i, blocks, after, 0, R, det)

    def _blocks(self, i, blocks, after, b, R, cur):
        if self.stop:
            return
        if b == len(blocks):
            if not any(R):
                self._accept(i, cur)
            return
        lo, size, a = blocks[b]
        aft = after[b + 1]
        cmin, cmax = 0, size
        for q in range(i):
            r = R[q]
            if (a >> q) & 1:
                l, h = size - r, size - r + aft
            else:
                l, h = r - aft, r
            if l > cmin:
                cmin = l
            if h < cmax:
                cmax = h
            if cmin > cmax:
                return
        for c in range(cmin, cmax + 1):
            R2 = [R[q] - ((size - c) if (a >> q) & 1 else c) for q in range(i)]
            ones = ((1 << c) - 1) << (lo + size - c) if c else 0
            self._blocks(i, blocks, after, b + 1, R2, cur | ones)
            if self.stop:
                return

    def run(self, start_rows, target_depth, limit=0, node_budget=0):
        self.rows = [0] * self.n
        k = 0
        for r in start_rows:
            self.rows[k] = r
            k += 1
        self.tri = []
        for i in range(k):
            self._push(i)
        self.out = []
        self.target_depth = target_depth
        self.limit = limit
        self.node_budget = node_budget
        self.nodes = 0
        self.stop = False
        self.exhausted = False
        self._descend(k)
        return self.out, self.exhausted, self.nodes
