import random

import pytest
from hypothesis import given, settings, strategies as st

import brute
from conftest import graphs
from congestlab import gadgets as G, oracles
from congestlab.comm import from_pairs
from congestlab.graph import Graph, GraphError


def clique(k):
    return Graph(k, [(u, v) for u in range(k) for v in range(u + 1, k)])


def cycle(n, w=1):
    return Graph(n, [(i, (i + 1) % n, w) for i in range(n)])


def test_vertex_cover_examples():
    tri = clique(3)
    assert oracles.verify_vertex_cover(tri, {0, 1})
    assert not oracles.verify_vertex_cover(tri, {0})
    assert oracles.min_vc_size(clique(6)) == 5
    assert oracles.min_vc_size(cycle(4)) == 2
    x = from_pairs(2, [(1, 0)])
    assert oracles.min_vc_size(G.build_mvc(2, x, x).graph) == 8


def test_budget_exceeded():
    assert oracles.min_vc_size(clique(6), 4) is None
    assert oracles.min_vc_size(clique(6), 5) == 5
    with pytest.raises(ValueError):
        oracles.min_vc_size(clique(3), -1)


@given(graphs(max_n=12, weighted=False))
def test_min_vc_matches_subset_search(g):
    size, cover = oracles.min_vertex_cover(g)
    assert size == brute.vc_size(g.n, g.edges()) == len(cover)
    assert oracles.verify_vertex_cover(g, cover)
    assert oracles.max_independent_set_size(g) == g.n - size


@settings(max_examples=10)
@given(graphs(min_n=14, max_n=16, weighted=False))
def test_min_vc_matches_subset_search_16(g):
    assert oracles.min_vc_size(g) == brute.vc_size(g.n, g.edges())


def test_coloring_examples():
    assert oracles.is_c_colorable(clique(3), 3)
    assert not oracles.is_c_colorable(clique(3), 2)
    assert oracles.chromatic_number(cycle(5)) == 3
    assert oracles.chromatic_number(clique(5), 4) is None
    assert not oracles.is_c_colorable(G.build_coloring3(2, [0] * 4, [1, 0, 0, 0]).graph, 3)


def test_verify_coloring_examples():
    tri = clique(3)
    assert not oracles.verify_coloring(tri, [0, 0, 0])
    assert oracles.verify_coloring(Graph(3, []), [0, 0, 0])
    with pytest.raises(GraphError):
        oracles.verify_coloring(tri, [0, 1])
    with pytest.raises(GraphError):
        oracles.verify_coloring(tri, {0: 0, 1: 1})


@given(graphs(max_n=8, weighted=False), st.integers(1, 4))
def test_colorable_matches_exhaustive(g, c):
    col = oracles.find_coloring(g, c)
    assert (col is not None) == brute.colorable(g.n, g.edges(), c)
    if col is not None:
        assert max(col, default=0) < c and oracles.verify_coloring(g, col)


@settings(max_examples=8)
@given(graphs(min_n=11, max_n=12, weighted=False))
def test_three_colorable_matches_exhaustive_12(g):
    assert oracles.is_c_colorable(g, 3) == brute.colorable(g.n, g.edges(), 3)


def test_cycle_examples():
    c8 = cycle(8)
    assert oracles.has_cycle_len8_weight(c8, 8)[0]
    assert not oracles.has_cycle_len8_weight(c8, 7)[0]
    assert len(oracles.cycles_len8_weight(c8, 8)) == 1
    assert oracles.has_cycle_len8_weight(cycle(9), 8) == (False, None)


@settings(max_examples=25)
@given(graphs(min_n=8, max_n=10, max_w=3))
def test_cycles_match_permutation_search(g):
    for W in (8, 10, 12):
        found = oracles.cycles_len8_weight(g, W)
        ref = brute.cycles8(g.n, g.edges(), W)
        as_edges = {frozenset(frozenset((c[t], c[(t + 1) % 8])) for t in range(8)) for c in found}
        assert len(found) == len(as_edges) == len(ref)
        assert as_edges == ref


def test_cycles_match_permutation_search_12():
    rng = random.Random(4)
    edges = {}
    for _ in range(22):
        u, v = sorted(rng.sample(range(12), 2))
        edges[u, v] = rng.randrange(3)
    g = Graph(12, [(u, v, w) for (u, v), w in edges.items()])
    for W in (6, 9):
        found = oracles.cycles_len8_weight(g, W)
        as_edges = {frozenset(frozenset((c[t], c[(t + 1) % 8])) for t in range(8)) for c in found}
        assert as_edges == brute.cycles8(12, g.edges(), W)


def test_check_identical():
    x = [3, 1, 4, 1, 5, 9]
    assert oracles.check_identical(G.build_identical_subgraphs(4, x, x))
    assert not oracles.check_identical(G.build_identical_subgraphs(4, x, x[:-1] + [2]))
    with pytest.raises(GraphError):
        oracles.check_identical(G.build_mvc(2, [0] * 4, [0] * 4))


def test_check_identical_agrees_with_eq():
    from congestlab.comm import eq
    from congestlab.sim import ident_values

    rng = random.Random(5)
    for _ in range(100):
        x = [rng.randrange(16) for _ in range(6)]
        y = list(x) if rng.random() < 0.5 else [rng.randrange(16) for _ in range(6)]
        inst = G.build_identical_subgraphs(4, x, y)
        xv, yv = ident_values(inst)
        assert oracles.check_identical(inst) == eq(x, y) == (xv == yv)
