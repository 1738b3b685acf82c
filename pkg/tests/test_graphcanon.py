from itertools import permutations

import numpy as np
import pytest

from conftest import paley
from skewhad.graphcanon import ColoredGraph, LabelBudgetExceeded, canonical_label_graph, isomorphic


def brute_auts(g):
    es = set(g.edges())
    return sum(
        1 for p in permutations(range(g.n))
        if all(g.colors[v] == g.colors[p[v]] for v in range(g.n)) and {(p[u], p[v]) for u, v in es} == es
    )


def brute_iso(g, h):
    eh = set(h.edges())
    return any(
        all(g.colors[v] == h.colors[p[v]] for v in range(g.n)) and {(p[u], p[v]) for u, v in g.edges()} == eh
        for p in permutations(range(g.n))
    )


def cycle(n, directed=True):
    return ColoredGraph.from_edges(n, [(i, (i + 1) % n) for i in range(n)], directed=directed)


def qr_tournament(q):
    sq = {(x * x) % q for x in range(1, q)}
    return ColoredGraph.from_edges(q, [(i, j) for i in range(q) for j in range(q) if (j - i) % q in sq])


@pytest.mark.parametrize("g,order", [
    (cycle(5), 5), (cycle(6, directed=False), 12),
    (ColoredGraph.from_edges(5, [(i, j) for i in range(5) for j in range(i + 1, 5)], directed=False), 120),
    (qr_tournament(7), 21), (qr_tournament(11), 55),
])
def test_automorphism_group_order(g, order):
    assert canonical_label_graph(g).aut_order == order


def test_petersen():
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    g = ColoredGraph.from_edges(10, outer + spokes + inner, directed=False)
    assert canonical_label_graph(g).aut_order == 120


def random_digraph(rng, n, p=0.35, ncolors=2):
    edges = [(u, v) for u in range(n) for v in range(n) if u != v and rng.random() < p]
    colors = [int(c) for c in rng.integers(0, ncolors, n)]
    return ColoredGraph.from_edges(n, edges, colors)


def test_against_brute_force(rng):
    for _ in range(120):
        g = random_digraph(rng, 6)
        if rng.random() < 0.5:
            h = g.relabel([int(x) for x in rng.permutation(6)])
        else:
            h = random_digraph(rng, 6)
        assert isomorphic(g, h) == brute_iso(g, h)
        assert canonical_label_graph(g).aut_order == brute_auts(g)


def test_relabel_invariance(rng):
    g = qr_tournament(19)
    c = canonical_label_graph(g)
    for _ in range(5):
        h = g.relabel([int(x) for x in rng.permutation(19)])
        assert canonical_label_graph(h) == c
        assert canonical_label_graph(h).digest == c.digest


def test_colours_respected():
    g = cycle(4)
    h = ColoredGraph(g.n, g.directed, g.out, (1, 0, 0, 0))
    assert not isomorphic(g, h)


def test_cycle_vs_path():
    path = ColoredGraph.from_edges(3, [(0, 1), (1, 2)])
    assert not isomorphic(cycle(3), path)


def test_tournament_not_isomorphic_to_converse_test():
    # the QR tournament on 7 points is isomorphic to its converse (x -> -x)
    g = qr_tournament(7)
    conv = ColoredGraph.from_edges(7, [(v, u) for u, v in g.edges()])
    assert isomorphic(g, conv)


def test_budget():
    g = ColoredGraph.from_edges(12, [], directed=False)
    with pytest.raises(LabelBudgetExceeded):
        canonical_label_graph(g, node_budget=3)


def test_empty_graph():
    assert canonical_label_graph(ColoredGraph.from_edges(0, [])).aut_order == 1
