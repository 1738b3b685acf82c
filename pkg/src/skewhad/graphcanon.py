"""Canonical labeling of vertex-colored (di)graphs by individualization-refinement.

Refinement splits cells by (own cell, sorted cells of out-neighbours, sorted
cells of in-neighbours) until stable.  The search individualizes each vertex
of the first smallest non-singleton cell.  Every node carries a trace (a
digest of its refinement), which is invariant under isomorphism; the
canonical leaf is the least (trace sequence, relabeled graph).  Subtrees are
skipped when their trace already exceeds the best one, or when an automorphism
fixing the current prefix maps the child onto an explored sibling.
"""

import hashlib
from dataclasses import dataclass


class LabelBudgetExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class ColoredGraph:
    n: int
    directed: bool
    out: tuple           # out-neighbours per vertex (tuples of ints)
    colors: tuple

    @classmethod
    def from_edges(cls, n, edges, colors=None, directed=True):
        out = [set() for _ in range(n)]
        for u, v in edges:
            out[u].add(v)
            if not directed:
                out[v].add(u)
        colors = tuple(colors) if colors is not None else (0,) * n
        return cls(n, directed, tuple(tuple(sorted(s)) for s in out), colors)

    @classmethod
    def from_adjacency(cls, adj, colors=None):
        n = len(adj)
        edges = [(u, v) for u in range(n) for v in range(n) if adj[u][v]]
        return cls.from_edges(n, edges, colors, directed=True)

    def edges(self):
        return [(u, v) for u in range(self.n) for v in self.out[u]]

    def relabel(self, perm):
        """Graph with vertex v renamed perm[v]."""
        n = self.n
        out = [None] * n
        colors = [None] * n
        for v in range(n):
            out[perm[v]] = tuple(sorted(perm[u] for u in self.out[v]))
            colors[perm[v]] = self.colors[v]
        return ColoredGraph(n, self.directed, tuple(out), tuple(colors))


@dataclass(frozen=True)
class CanonCertificate:
    edges: tuple          # relabeled edges, sorted
    colors: tuple         # colour of each canonical position
    aut_order: int
    labeling: tuple       # vertex -> canonical position
    digest: str           # sha256 hex of (colors, edges)

    def __eq__(self, other):
        return isinstance(other, CanonCertificate) and self.colors == other.colors and self.edges == other.edges

    def __hash__(self):
        return hash(self.digest)


def _digest(obj):
    return hashlib.sha256(repr(obj).encode()).hexdigest()


class _Labeler:
    def __init__(self, g, node_budget):
        self.g = g
        self.n = g.n
        self.out = g.out
        inn = [[] for _ in range(g.n)]
        for u in range(g.n):
            for v in g.out[u]:
                inn[v].append(u)
        self.inn = [tuple(x) for x in inn]
        self.node_budget = node_budget
        self.nodes = 0
        self.gens = []
        self.first = None         # (traces, cert, labeling, path)
        self.best = None          # (traces, cert, labeling)

    def refine(self, cell):
        n = self.n
        out, inn = self.out, self.inn
        ncells = len(set(cell))
        trace = []
        while True:
            sig = [None] * n
            for v in range(n):
                sig[v] = (cell[v], tuple(sorted(cell[u] for u in out[v])), tuple(sorted(cell[u] for u in inn[v])))
            order = sorted(set(sig))
            rank = {s: i for i, s in enumerate(order)}
            cell = [rank[s] for s in sig]
            if len(order) == ncells:
                trace.append(len(order))
                break
            trace.append(_digest(order))
            ncells = len(order)
        return cell, _digest(trace)

    @staticmethod
    def individualize(cell, v):
        # v moves to a new cell just before the rest of its old cell
        return [2 * c + (0 if u == v else 1) if c == cell[v] else 2 * c + 1 for u, c in enumerate(cell)]

    def target(self, cell):
        size = {}
        for c in cell:
            size[c] = size.get(c, 0) + 1
        best = None
        for c in sorted(size):
            s = size[c]
            if s > 1 and (best is None or s < best[1]):
                best = (c, s)
        if best is None:
            return None
        return [v for v in range(self.n) if cell[v] == best[0]]

    def certificate(self, lab):
        colors = [None] * self.n
        for v in range(self.n):
            colors[lab[v]] = self.g.colors[v]
        edges = sorted((lab[u], lab[v]) for u in range(self.n) for v in self.out[u])
        return (tuple(colors), tuple(edges))

    def orbits(self, fixed):
        parent = list(range(self.n))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for g in self.gens:
            if all(g[v] == v for v in fixed):
                for v in range(self.n):
                    a, b = find(v), find(g[v])
                    if a != b:
                        parent[a] = b
        return find

    def add_aut(self, lab_a, lab_b):
        # vertex u of leaf a corresponds to the vertex of leaf b at the same position
        inv_b = [0] * self.n
        for v, p in enumerate(lab_b):
            inv_b[p] = v
        g = tuple(inv_b[lab_a[u]] for u in range(self.n))
        if any(g[v] != v for v in range(self.n)):
            self.gens.append(g)

    def search(self, cell, path, traces):
        self.nodes += 1
        if self.node_budget and self.nodes > self.node_budget:
            raise LabelBudgetExceeded(f"labeler exceeded {self.node_budget} nodes")
        cell, tr = self.refine(cell)
        traces = traces + (tr,)
        d = len(traces)
        on_first = self.first is None or self.first[0][:d] == traces
        if not on_first and self.best is not None and traces > self.best[0][:d]:
            return
        tgt = self.target(cell)
        if tgt is None:
            lab = tuple(cell)
            cert = self.certificate(lab)
            if self.first is None:
                self.first = (traces, cert, lab, tuple(path))
                self.best = (traces, cert, lab)
                return
            if traces == self.first[0] and cert == self.first[1]:
                self.add_aut(self.first[2], lab)
            key = (traces, cert)
            bkey = (self.best[0], self.best[1])
            if key == bkey:
                self.add_aut(self.best[2], lab)
            elif key < bkey:
                self.best = (traces, cert, lab)
            return
        explored = []
        for v in tgt:
            if explored:
                find = self.orbits(path)
                rv = find(v)
                if any(find(u) == rv for u in explored):
                    continue
            explored.append(v)
            self.search(self.individualize(cell, v), path + [v], traces)

    def aut_order(self):
        path = list(self.first[3])
        order = 1
        for d in range(len(path)):
            find = self.orbits(path[:d])
            r = find(path[d])
            order *= sum(1 for v in range(self.n) if find(v) == r)
        return order


def canonical_label_graph(g, node_budget=200000):
    """Certificate equal for two graphs iff they are isomorphic (colours respected)."""
    if g.n == 0:
        return CanonCertificate((), (), 1, (), _digest(((), ())))
    lb = _Labeler(g, node_budget)
    palette = sorted(set(g.colors))
    cell = [palette.index(c) for c in g.colors]
    lb.search(cell, [], ())
    traces, cert, lab = lb.best
    colors, edges = cert
    return CanonCertificate(edges, colors, lb.aut_order(), lab, _digest((colors, edges)))


def isomorphic(g, h, node_budget=200000):
    if g.n != h.n or sorted(g.colors) != sorted(h.colors):
        return False
    return canonical_label_graph(g, node_budget) == canonical_label_graph(h, node_budget)
