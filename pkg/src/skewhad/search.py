"""Enumeration engines: skew-type seeded backtracking and orderly generation.

Seeded search.  For skew type (t, eps) with eps in {1, 2} the first four rows
are fixed to a column-permuted copy of the four-row normal form, followed by
eight column segments.  Rows are then added one at a time.  Within a run of
consecutive columns of one segment on which all earlier rows agree, swapping
two columns (and the matching rows) maps completions to completions, so the
-1 entries of the current row are packed to the right end of every such run.
At the row given by the seed form, the mod-4 parity rule fixes the row outright.
Every new row is checked against all earlier triples and the branch dies as
soon as a quadruple of smaller skew type appears.

Partial matrices at the dedup depths are merged by an invariant of their
SH-class under signed permutations fixing the completed rows; the first
generated representative is kept.  Subtrees below the last dedup depth are
the units of parallel work and of checkpointing.
"""

import hashlib
import logging
import os
from dataclasses import dataclass, field
from multiprocessing import get_context

import mpmath
import numpy as np
from scipy.optimize import Bounds, LinearConstraint, milp

from . import kernels
from .canonical import canon_codes, canon_hex, is_sh_canonical, matrix_from_codes, partial_key
from .matrix import SignMatrix, as_matrix, matrix_skew_type, validate

log = logging.getLogger(__name__)

ORDERING = "lexmin-0/1-colmajor"


class BudgetExceeded(RuntimeError):
    pass


class CheckpointMismatch(RuntimeError):
    pass


# ------------------------------------------------------------------ seeds

@dataclass(frozen=True)
class SeedForm:
    n: int
    t: int
    eps: int
    rows: tuple          # the four seed rows, packed
    segments: tuple      # segment id per column
    forced: int          # 0-based forced row/column, -1 if none
    group: int           # mask of the other columns fixing the forced column

    @property
    def s(self):
        return self.n // 4 - self.t


def _pack(entries):
    r = 0
    for j, v in enumerate(entries):
        if v < 0:
            r |= 1 << j
    return r


def seed_quadruple(n, t, eps):
    """The four leading rows (as a SeedForm) for skew type (t, eps)."""
    if n % 4 or n < 4:
        raise ValueError(f"order {n} is not a positive multiple of 4")
    if eps not in (1, 2):
        raise ValueError("seeded search covers eps in {1, 2}; eps = 0 goes through the transpose")
    s = n // 4 - t
    if t < 0 or s < t:
        raise ValueError(f"need 0 <= t <= s, got t={t}, s={s}")
    if t == 0 and (eps == 1 or (n % 8 == 4 and n > 4)):
        raise ValueError(f"skew type (0, {eps}) cannot occur at order {n}")
    if eps == 1:
        head = [[1, 1, 1, 1], [-1, 1, 1, 1], [-1, -1, 1, 1], [-1, -1, -1, 1]]
        sizes = [t - 1, t, t, t - 1, s - 1, s - 1, s, s]
        pats = [(1, 1, 1, -1), (1, 1, -1, 1), (1, -1, 1, 1), (1, -1, -1, -1),
                (1, 1, 1, 1), (1, 1, -1, -1), (1, -1, 1, -1), (1, -1, -1, 1)]
        forced = 4 * t + 1
        group = {0, 2} | set(range(4, 4 * t + 1))
    else:
        head = [[1, 1, 1, 1], [-1, 1, 1, -1], [-1, -1, 1, 1], [-1, 1, -1, 1]]
        sizes = [t, t, t, t, s - 1, s - 1, s - 1, s - 1]
        pats = [(1, 1, 1, 1), (1, 1, -1, -1), (1, -1, 1, -1), (1, -1, -1, 1),
                (1, 1, 1, -1), (1, 1, -1, 1), (1, -1, 1, 1), (1, -1, -1, -1)]
        forced = 4 * t + 3 if t >= 1 else -1
        group = set(range(4, 4 * t + 3))
    rows = [list(h) for h in head]
    segments = [0, 1, 2, 3]
    for sid, (size, pat) in enumerate(zip(sizes, pats)):
        for r in range(4):
            rows[r].extend([pat[r]] * size)
        segments.extend([4 + sid] * size)
    assert len(segments) == n
    return SeedForm(n, t, eps, tuple(_pack(r) for r in rows), tuple(segments),
                    forced, sum(1 << j for j in group) if forced >= 0 else 0)


def mod4_targets(n, s, t):
    """Residues mod 4 of the signed x- and y-segment sums for rows past the fourth."""
    if s + t != n // 4:
        raise ValueError("need s + t = n/4")
    return ((2 * s - n // 2) % 4, (2 * t - n // 2) % 4)


def parity_ok(row, form):
    """Every row past the fourth has n/4 mod 2 entries -1 in each column class."""
    seed = form.rows
    odd = 0
    for j in range(form.n):
        if (((seed[1] >> j) ^ (seed[2] >> j) ^ (seed[3] >> j)) & 1):
            odd |= 1 << j
    even = ((1 << form.n) - 1) & ~odd
    par = (form.n // 4) & 1
    return (row & odd).bit_count() % 2 == par and (row & even).bit_count() % 2 == par


def forced_row(rows, form):
    """Row ``form.forced`` from the rows before it, or None if it is not orthogonal to them."""
    f = form.forced
    if f < 0:
        raise ValueError("this seed form has no forced row")
    if len(rows) < f:
        raise ValueError(f"need {f} completed rows, got {len(rows)}")
    n = form.n
    row = 0
    for j in range(f):
        if not (rows[j] >> f) & 1:
            row |= 1 << j
    par0 = (n // 4) & 1
    for c in range(f + 1, n):
        par = par0
        for j in range(n):
            if (form.group >> j) & 1:
                par ^= 1 ^ ((rows[j] >> c) & 1)
        if not par:
            row |= 1 << c
    if any((row ^ rows[q]).bit_count() != n // 2 for q in range(f)):
        return None
    return row


def next_rows(rows, n):
    """All rows extending a partial skew matrix: skew pattern and orthogonality."""
    rows = tuple(rows)
    k = len(rows)
    if k >= n:
        return []
    rs = kernels.RowSearch(n, list(range(n)))
    out, _, _ = rs.run(rows, k + 1)
    return sorted(o[k] for o in out)


# ----------------------------------------------------------------- config

@dataclass
class SearchConfig:
    workers: int = 1
    dedup_depths: tuple = None   # None: DEDUP_DEPTHS thinned around the forced row
    limit: int = 0
    node_budget: int = 0
    checkpoint: str = None
    stop_after: int = 0          # process at most this many units (for interrupt tests)
    extra: dict = field(default_factory=dict)

    def depths(self, form):
        if self.dedup_depths is not None:
            return tuple(sorted(d for d in self.dedup_depths if 4 < d < form.n))
        return default_dedup_depths(form)

    def config_hash(self, n, st):
        depths = self.depths(seed_quadruple(n, *st))
        text = f"n={n};st={st};dedup={depths};order={ORDERING};limit={self.limit}"
        return hashlib.sha256(text.encode()).hexdigest()[:16]


DEDUP_DEPTHS = (6, 8, 10)


def default_dedup_depths(form):
    """Partial classes between the first dedup level and the forced row barely merge, so skip them."""
    first = DEDUP_DEPTHS[0]
    return tuple(d for d in DEDUP_DEPTHS if 4 < d < form.n and (d == first or form.forced < 0 or not first < d <= form.forced))


def _searcher(form, st):
    return kernels.RowSearch(form.n, list(form.segments), form.forced, form.group, st[0], st[1])


def expand_frontier(form, st, cfg):
    """Breadth-first expansion through the dedup depths; returns the work units."""
    n = form.n
    frontier = [form.rows]
    depths = cfg.depths(form)
    rs = _searcher(form, st)
    for d in depths:
        seen = {}
        for node in frontier:
            kids, exhausted, _ = rs.run(node, d, 0, cfg.node_budget)
            if exhausted:
                raise BudgetExceeded(f"node budget exceeded at depth {d}")
            for kid in kids:
                key = partial_key(kid, d, n)
                if key not in seen:
                    seen[key] = kid
        frontier = list(seen.values())
        log.info("n=%d %s depth %d: %d partial classes", n, st, d, len(frontier))
    return frontier


def _solve_unit(args):
    n, st, unit, node_budget, limit = args
    form = seed_quadruple(n, *st)
    rs = _searcher(form, st)
    sols, exhausted, nodes = rs.run(unit, n, limit, node_budget)
    found = {}
    for rows in sols:
        m = SignMatrix(n, tuple(rows))
        if matrix_skew_type(m, check=False) != st:
            continue
        key = canon_hex(m)
        found.setdefault(key, m)
    return sorted(found), exhausted, nodes


def _read_checkpoint(path, chash):
    done = {}
    if not path or not os.path.exists(path):
        return done
    with open(path) as fh:
        first = fh.readline().split()
        if first[:1] != ["config"] or first[1:2] != [chash]:
            raise CheckpointMismatch(f"checkpoint {path} was written with a different configuration")
        for line in fh:
            parts = line.split()
            if len(parts) >= 3 and parts[0] == "done":
                hexes = parts[3].split(",") if len(parts) > 3 and parts[3] != "-" else []
                done[int(parts[1])] = hexes
    return done


def _open_checkpoint(path, chash, fresh):
    if fresh:
        fh = open(path, "w")
        fh.write(f"config {chash}\n")
        fh.flush()
        return fh
    return open(path, "a")


@dataclass
class SearchResult:
    n: int
    skew_type: tuple
    matrices: list        # canonical SignMatrix, sorted by key
    keys: list
    complete: bool
    units: int
    nodes: int = 0


def classify_skew_type(n, st, cfg=None):
    """All SH-classes of order n and exact skew type st (eps in {1, 2})."""
    cfg = cfg or SearchConfig()
    st = tuple(st)
    form = seed_quadruple(n, *st)
    units = expand_frontier(form, st, cfg)
    chash = cfg.config_hash(n, st)
    done = _read_checkpoint(cfg.checkpoint, chash)
    ck = _open_checkpoint(cfg.checkpoint, chash, not done) if cfg.checkpoint else None
    todo = [i for i in range(len(units)) if i not in done]
    if cfg.stop_after:
        todo = todo[: cfg.stop_after]
    jobs = [(n, st, units[i], cfg.node_budget, cfg.limit) for i in todo]
    results = dict(done)
    complete = True
    nodes = 0
    try:
        if cfg.workers > 1 and len(jobs) > 1:
            ctx = get_context("fork")
            with ctx.Pool(cfg.workers) as pool:
                stream = pool.imap(_solve_unit, jobs, chunksize=1)
                for i, (keys, exhausted, cnt) in zip(todo, stream):
                    nodes += cnt
                    complete &= not exhausted
                    results[i] = keys
                    _note(ck, i, keys)
        else:
            for i, job in zip(todo, jobs):
                keys, exhausted, cnt = _solve_unit(job)
                nodes += cnt
                complete &= not exhausted
                results[i] = keys
                _note(ck, i, keys)
                if cfg.limit and sum(len(v) for v in results.values()) >= cfg.limit:
                    complete = False
                    break
    finally:
        if ck:
            ck.close()
    if len(results) < len(units):
        complete = False
    keys = sorted({k for v in results.values() for k in v})
    mats = [key_to_matrix(k, n) for k in keys]
    return SearchResult(n, st, mats, keys, complete, len(units), nodes)


def _note(fh, i, keys):
    if fh is None:
        return
    fh.write(f"done {i} {len(keys)} {','.join(keys) if keys else '-'}\n")
    fh.flush()


def key_to_matrix(key, n):
    from .canonical import from_sh_vector

    bits = np.unpackbits(np.frombuffer(bytes.fromhex(key), dtype=np.uint8))[: n * (n - 1) // 2]
    return from_sh_vector(bits, n)


def first_solutions(n, st, limit=1, node_budget=0):
    """Depth-first from the seed until ``limit`` matrices of exact skew type st appear."""
    form = seed_quadruple(n, *st)
    rs = _searcher(form, st)
    sols, exhausted, nodes = rs.run(form.rows, n, limit, node_budget)
    mats = [SignMatrix(n, tuple(r)) for r in sols]
    mats = [m for m in mats if matrix_skew_type(m, check=False) == tuple(st)]
    return mats, exhausted, nodes


# --------------------------------------------------------------- census

def seeded_skew_types(n):
    out = []
    for t in range(n // 8 + 1):
        if n // 4 - t < t:
            continue
        for e in (1, 2):
            try:
                seed_quadruple(n, t, e)
            except ValueError:
                continue
            out.append((t, e))
    return out


def _tiny(n):
    # orders 1 and 2: a single skew Hadamard matrix each
    rows = (0,) if n == 1 else (0, 1)
    return SignMatrix(n, rows)


@dataclass
class Census:
    n: int
    by_type: dict        # skew type -> sorted list of canonical keys
    complete: bool

    @property
    def total(self):
        return len({k for v in self.by_type.values() for k in v})

    def matrices(self):
        keys = sorted({k for v in self.by_type.values() for k in v})
        return [key_to_matrix(k, self.n) for k in keys]

    def lines(self):
        out = []
        for st in sorted(self.by_type):
            for k in self.by_type[st]:
                out.append(f"{self.n}\t{st[0]},{st[1]}\t{k}")
        return out


def classify_all(n, cfg=None, only=None):
    """Full SH-classification; (t, 0) classes come from transposing (t-1, 2) ones."""
    cfg = cfg or SearchConfig()
    if n in (1, 2):
        return Census(n, {(): [canon_hex(_tiny(n))]}, True)
    if n % 4:
        return Census(n, {}, True)
    by_type = {}
    complete = True
    base_cp = cfg.checkpoint
    for st in seeded_skew_types(n):
        if only and st not in only and (st[0] + 1, 0) not in only:
            continue
        sub = SearchConfig(cfg.workers, cfg.dedup_depths, cfg.limit, cfg.node_budget,
                           f"{base_cp}.{st[0]}-{st[1]}" if base_cp else None, cfg.stop_after)
        res = classify_skew_type(n, st, sub)
        complete &= res.complete
        if res.keys:
            by_type[st] = res.keys
        if st[1] == 2:
            derived = transposed_classes(res.matrices, (st[0] + 1, 0))
            if derived:
                by_type[(st[0] + 1, 0)] = derived
    if only:
        by_type = {k: v for k, v in by_type.items() if k in only}
    return Census(n, by_type, complete)


def transposed_classes(matrices, st):
    keys = set()
    for m in matrices:
        tm = m.transpose()
        if matrix_skew_type(tm, check=False) == st:
            keys.add(canon_hex(tm))
    return sorted(keys)


# ----------------------------------------------------- orderly generation

def _patterns(k):
    # +-1 columns of length k with first entry +1, as an array (count, k)
    p = np.arange(1 << (k - 1))
    bits = (p[:, None] >> np.arange(k - 2, -1, -1)[None, :]) & 1
    return np.hstack([np.ones((len(p), 1), dtype=np.int64), 1 - 2 * bits])


def _codes_upto(pats, j):
    # integer code of rows 1..j-1 of each pattern (row 1 most significant)
    if j <= 1:
        return np.zeros(len(pats), dtype=np.int64)
    bits = (pats[:, 1:j] < 0).astype(np.int64)
    w = 1 << np.arange(j - 2, -1, -1)
    return bits @ w


def completion_feasible(block, n, cols=None):
    """Can the k x k canonical block be bordered by n - k further columns?

    Solves for nonnegative integer multiplicities of +-1 column patterns
    (first entry +1) whose outer products make the rows pairwise orthogonal.
    With ``cols`` given, each pattern must also respect canonical order:
    on rows 2..j-1 it may not precede column j of the block.
    """
    X = as_matrix(block).to_array().astype(np.int64)
    k = X.shape[0]
    r = n - k
    G = X @ X.T
    need = -G[np.triu_indices(k, 1)]
    if np.any(np.abs(need) > r) or np.any((need - r) % 2):
        return False
    if r == 0:
        return not np.any(need)
    if np.linalg.eigvalsh(n * np.eye(k) - G).min() < -1e-9:
        return False
    pats = _patterns(k)
    if cols is not None:
        keep = np.ones(len(pats), dtype=bool)
        for j in range(2, k):
            keep &= _codes_upto(pats, j) >= cols[j]
        pats = pats[keep]
        if len(pats) == 0:
            return False
    iu = np.triu_indices(k, 1)
    A = (pats[:, iu[0]] * pats[:, iu[1]]).T
    A = np.vstack([A, np.ones((1, len(pats)), dtype=np.int64)])
    b = np.concatenate([need, [r]])
    res = milp(c=np.zeros(len(pats)), constraints=LinearConstraint(A, b, b),
               integrality=np.ones(len(pats)), bounds=Bounds(0, r))
    return res.status == 0


@dataclass
class OrderlyResult:
    n: int
    levels: dict      # k -> list of column-code tuples
    counts: dict


def orderly_generate(n, depth, start=None, feasibility=True):
    """Canonical k x k leading blocks (k <= depth) that pass the completion test.

    ``start`` is an optional canonical block (column codes) to extend from.
    """
    if depth > n:
        raise ValueError("depth exceeds order")
    if start is None:
        level = [(0,)]
        k0 = 1
    else:
        level = [tuple(start)]
        k0 = len(start)
    levels = {k0: level}
    for k in range(k0 + 1, depth + 1):
        nxt = []
        for cols in level:
            prev = cols[-1] if k > 2 else 0
            for b in range(1 << (k - 2)):
                # canonical order forces the new column's top bits past the previous column
                if k > 2 and (b >> 1) < prev:
                    continue
                c = cols + (b,)
                block = matrix_from_codes(c, k)
                if not _pair_budget(block, n):
                    continue
                if canon_codes(block) != list(c):
                    continue
                if feasibility and not completion_feasible(block, n, c):
                    continue
                nxt.append(c)
        level = nxt
        levels[k] = level
        log.info("orderly n=%d k=%d: %d", n, k, len(level))
    return OrderlyResult(n, levels, {k: len(v) for k, v in levels.items()})


def _pair_budget(block, n):
    k = block.n
    for i in range(k):
        for j in range(i + 1, k):
            d = k - 2 * (block.rows[i] ^ block.rows[j]).bit_count()
            if abs(d) > n - k or (n - k - d) % 2:
                return False
    return True


def orderly_classify(n):
    """Complete classification by orderly generation alone (small orders)."""
    res = orderly_generate(n, n)
    return sorted(canon_hex(matrix_from_codes(c, n)) for c in res.levels[n])


# ------------------------------------------------------------ J_k and bound

def max_Jk(m):
    """Largest k such that a signed principal k x k submatrix is J_k (upper triangle +1)."""
    m = as_matrix(m)
    return kernels.max_transitive_chain(m.rows, m.n)[0]


def k_upper_bound(n):
    """Largest k with cot^2(pi / 2k) <= n - 1."""
    if n < 2:
        raise ValueError("need n >= 2")
    with mpmath.workdps(60):
        x = mpmath.pi / (2 * mpmath.acot(mpmath.sqrt(n - 1)))
        k = int(mpmath.floor(x))
        if abs(x - (k + 1)) < mpmath.mpf(10) ** -40:
            k += 1
        # guard: confirm with the defining inequality directly
        while k > 1 and mpmath.cot(mpmath.pi / (2 * k)) ** 2 > n - 1 + mpmath.mpf(10) ** -40:
            k -= 1
        while mpmath.cot(mpmath.pi / (2 * (k + 1))) ** 2 <= n - 1 + mpmath.mpf(10) ** -40:
            k += 1
    return k


def check_completed(m, form):
    """Seed-form consistency for a completed matrix from the seeded search."""
    m = as_matrix(m)
    if not validate(m)["skew"]:
        return False
    if form.forced >= 0 and forced_row(m.rows[: form.forced], form) != m.rows[form.forced]:
        return False
    return all(parity_ok(r, form) for r in m.rows[4:])
