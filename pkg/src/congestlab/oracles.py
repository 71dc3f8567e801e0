"""Exact sequential solvers used as ground truth for every reduction predicate.

Budgeted solvers return ``None`` when the answer exceeds the budget, so the
lemma checks ("= M" against "> M", "<= c" against "> c") have bounded cost.
"""

from __future__ import annotations

from typing import Iterable, Mapping, Sequence

from . import _kernels
from .gadgets import IDENTICAL, LowerBoundInstance, pairs
from .graph import Graph, GraphError


def verify_vertex_cover(g: Graph, u: Iterable[int]) -> bool:
    s = set(u)
    return all(a in s or b in s for a, b, _ in g.edges())


def min_vertex_cover(g: Graph, budget: int | None = None) -> tuple[int, list[int]] | None:
    """Minimum cover as ``(size, nodes)`` if its size is <= budget, else ``None``."""
    budget = g.n if budget is None else budget
    if budget < 0:
        raise ValueError("budget must be >= 0")
    return _kernels.min_vertex_cover(g.n, g.edges(), budget)


def min_vc_size(g: Graph, budget: int | None = None) -> int | None:
    """Exact minimum vertex-cover size, or ``None`` if it exceeds ``budget``."""
    res = min_vertex_cover(g, budget)
    return None if res is None else res[0]


def max_independent_set_size(g: Graph) -> int:
    return g.n - min_vc_size(g)


def greedy_clique(g: Graph) -> list[int]:
    """A large clique found greedily from every start node (used to seed colorings)."""
    best: list[int] = []
    nbr = [set(g.neighbors(u)) for u in range(g.n)]
    for s in range(g.n):
        clique = [s]
        cand = set(nbr[s])
        while cand:
            v = max(cand, key=lambda u: (len(nbr[u] & cand), -u))
            clique.append(v)
            cand &= nbr[v]
        if len(clique) > len(best):
            best = clique
    return sorted(best)


def find_coloring(g: Graph, c: int, seed_clique: Sequence[int] | None = None) -> list[int] | None:
    """A proper coloring with at most ``c`` colors, or ``None`` if none exists.

    A clique is pre-colored ``0..q-1`` first; any coloring can be permuted to
    agree with it, so this loses nothing and prunes the color symmetry.
    """
    if c < 1:
        raise ValueError("c must be >= 1")
    if g.n == 0:
        return []
    clique = list(seed_clique) if seed_clique is not None else greedy_clique(g)
    if len(clique) > c:
        return None
    return _kernels.color(g.n, g.edges(), c, {v: r for r, v in enumerate(clique)})


def is_c_colorable(g: Graph, c: int) -> bool:
    return find_coloring(g, c) is not None


def chromatic_number(g: Graph, c_max: int | None = None) -> int | None:
    """Least c with a proper c-coloring, or ``None`` if it exceeds ``c_max``."""
    if g.n == 0:
        return 0
    c_max = g.n if c_max is None else c_max
    clique = greedy_clique(g)
    for c in range(max(1, len(clique)), c_max + 1):
        if find_coloring(g, c, clique) is not None:
            return c
    return None


def verify_coloring(g: Graph, col: Sequence[int] | Mapping[int, int]) -> bool:
    if isinstance(col, Mapping):
        missing = [u for u in range(g.n) if u not in col]
    else:
        missing = list(range(len(col), g.n)) + [u for u in range(min(len(col), g.n)) if col[u] is None or col[u] < 0]
    if missing:
        raise GraphError(f"coloring misses nodes {missing[:5]}")
    return all(col[u] != col[v] for u, v, _ in g.edges())


def cycles_len8_weight(g: Graph, W: int, limit: int = 10**5) -> list[tuple[int, ...]]:
    """All (up to ``limit``) simple 8-node cycles of weight exactly W, each once."""
    return _kernels.cycles8(g.n, g.edges(), W, limit)


def has_cycle_len8_weight(g: Graph, W: int) -> tuple[bool, tuple[int, ...] | None]:
    found = cycles_len8_weight(g, W, limit=1)
    return (True, found[0]) if found else (False, None)


def cycle_weight(g: Graph, cyc: Sequence[int]) -> int:
    return sum(g.weight(cyc[t], cyc[(t + 1) % len(cyc)]) for t in range(len(cyc)))


def check_identical(inst: LowerBoundInstance) -> bool:
    """Single pass over index pairs comparing edge presence and weight on both sides."""
    if inst.kind != IDENTICAL:
        raise GraphError(f"expected an IDENTICAL instance, got {inst.kind}")
    g = inst.graph
    a, b = inst.groups["A"], inst.groups["B"]
    for i, j in pairs(len(a)):
        ea, eb = g.has_edge(a[i], a[j]), g.has_edge(b[i], b[j])
        if ea != eb or (ea and g.weight(a[i], a[j]) != g.weight(b[i], b[j])):
            return False
    return True
