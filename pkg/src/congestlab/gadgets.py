"""Generators for the lower-bound graph families and their explicit witnesses.

Every builder returns a :class:`LowerBoundInstance`: the graph ``G_{x,y}``, its
fixed Alice/Bob partition, the inputs it encodes and named node groups. Node
order is canonical (A1, A2, B1, B2, bit gadgets in set order, then auxiliary
nodes), so instances are identical across runs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations
from typing import Sequence

from .comm import Bits, InputError, bits, validate_disj_input
from .graph import Graph, Partition

MVC = "MVC"
COLORING3 = "COLORING3"
COLORING_C = "COLORING_C"
COLORING_APPROX = "COLORING_APPROX"
CYCLE8 = "CYCLE8"
IDENTICAL = "IDENTICAL"
APSP_STAR = "APSP_STAR"
KINDS = (MVC, COLORING3, COLORING_C, COLORING_APPROX, CYCLE8, IDENTICAL, APSP_STAR)

SETS = ("A1", "A2", "B1", "B2")


@dataclass(frozen=True)
class LowerBoundInstance:
    kind: str
    graph: Graph
    partition: Partition
    params: dict
    x: tuple
    y: tuple | None = None
    groups: dict = field(default_factory=dict, compare=False)

    @property
    def n(self) -> int:
        return self.graph.n

    def node(self, label: str) -> int:
        return self.graph.index_of(label)

    def group(self, name: str) -> list[int]:
        return self.groups[name]


class _Builder:
    def __init__(self):
        self.labels: list[str] = []
        self.edges: dict[tuple[int, int], int] = {}
        self.groups: dict[str, list[int]] = {}

    def nodes(self, group: str, labels: Sequence[str]) -> list[int]:
        ids = list(range(len(self.labels), len(self.labels) + len(labels)))
        self.labels.extend(labels)
        self.groups[group] = ids
        return ids

    def edge(self, u: int, v: int, w: int = 1) -> None:
        key = (u, v) if u < v else (v, u)
        self.edges[key] = w

    def clique(self, ids: Sequence[int], w: int = 1) -> None:
        for u, v in combinations(ids, 2):
            self.edge(u, v, w)

    def graph(self) -> Graph:
        return Graph(len(self.labels), [(u, v, w) for (u, v), w in sorted(self.edges.items())], self.labels)


def _log2_exact(k: int) -> int:
    if k < 2 or k & (k - 1):
        raise InputError(f"k must be a power of two >= 2, got {k}")
    return k.bit_length() - 1


def _check_pair_inputs(k: int, x, y, *, forbid_all_ones: bool = True) -> tuple[Bits, Bits]:
    x, y = bits(x), bits(y)
    if len(x) != k * k or len(y) != k * k:
        raise InputError(f"inputs must have k^2={k * k} bits, got {len(x)} and {len(y)}")
    if forbid_all_ones and not validate_disj_input(x, y):
        raise InputError("all-ones inputs are excluded")
    return x, y


def bin_selector(i: int, logk: int) -> frozenset[tuple[str, int]]:
    """Bit-gadget targets of index ``i``: ``("F", h)`` if bit h of i is 0, else ``("T", h)``."""
    if not 0 <= i < (1 << logk):
        raise InputError(f"index {i} out of range for {logk} bits")
    return frozenset(("T" if i >> h & 1 else "F", h) for h in range(logk))


def _bit_gadgets(b: _Builder, k: int, logk: int) -> None:
    """Sets, bit nodes, the 2 log k 4-cycles and the bin() edges (shared by MVC and coloring)."""
    for s in SETS:
        b.nodes(s, [f"{s}[{i}]" for i in range(k)])
    for s in SETS:
        for pol in "FT":
            b.nodes(f"{pol}_{s}", [f"{pol}_{s}[{h}]" for h in range(logk)])
    g = b.groups
    for l in "12":
        for h in range(logk):
            fa, ta = g[f"F_A{l}"][h], g[f"T_A{l}"][h]
            fb, tb = g[f"F_B{l}"][h], g[f"T_B{l}"][h]
            for u, v in ((fa, ta), (ta, fb), (fb, tb), (tb, fa)):
                b.edge(u, v)
    for s in SETS:
        for i, u in enumerate(g[s]):
            for pol, h in bin_selector(i, logk):
                b.edge(u, g[f"{pol}_{s}"][h])


def _input_edges(b: _Builder, k: int, x: Bits, y: Bits) -> None:
    g = b.groups
    for i in range(k):
        for j in range(k):
            if x[k * i + j] == 0:
                b.edge(g["A1"][i], g["A2"][j])
            if y[k * i + j] == 0:
                b.edge(g["B1"][i], g["B2"][j])


def bin_nodes(inst: LowerBoundInstance, s: str, i: int) -> list[int]:
    logk = inst.params["logk"]
    return sorted(inst.groups[f"{pol}_{s}"][h] for pol, h in bin_selector(i, logk))


# -- minimum vertex cover -------------------------------------------------------

def mvc_target(k: int) -> int:
    """Cover size that exists iff the inputs intersect: ``4(k-1) + 4 log k``."""
    return 4 * (k - 1) + 4 * _log2_exact(k)


def build_mvc(k: int, x, y) -> LowerBoundInstance:
    logk = _log2_exact(k)
    x, y = _check_pair_inputs(k, x, y)
    b = _Builder()
    _bit_gadgets(b, k, logk)
    for s in SETS:
        b.clique(b.groups[s])
    _input_edges(b, k, x, y)
    g = b.graph()
    a_side = [u for s in ("A1", "A2") for grp in (s, f"F_{s}", f"T_{s}") for u in b.groups[grp]]
    return LowerBoundInstance(
        MVC, g, Partition.from_sets(g.n, a_side), {"k": k, "logk": logk, "M": mvc_target(k)}, x, y, b.groups
    )


def construct_mvc_cover(inst: LowerBoundInstance, i: int, j: int) -> set[int]:
    """The size-M cover for a shared 1 at ``(i, j)``: all clique nodes but one each, plus their bin() nodes."""
    if inst.kind != MVC:
        raise InputError(f"expected an MVC instance, got {inst.kind}")
    k = inst.params["k"]
    if not (inst.x[k * i + j] == inst.y[k * i + j] == 1):
        raise InputError(f"x and y do not share a 1 at ({i},{j})")
    g = inst.groups
    skip = {"A1": i, "A2": j, "B1": i, "B2": j}
    cover: set[int] = set()
    for s, idx in skip.items():
        cover.update(u for t, u in enumerate(g[s]) if t != idx)
        cover.update(bin_nodes(inst, s, idx))
    return cover


# -- 3-coloring and its extensions ----------------------------------------------

def build_coloring3(k: int, x, y) -> LowerBoundInstance:
    logk = _log2_exact(k)
    x, y = _check_pair_inputs(k, x, y)
    b = _Builder()
    _bit_gadgets(b, k, logk)
    for s in SETS:
        b.nodes(f"{s}'", [f"{s}'[{i}]" for i in range(k)])
        b.nodes(f"{s}''", [f"{s}''[{i}]" for i in range(k)])
    ca = b.nodes("Ca", [f"Ca[{r}]" for r in range(3)])
    cb = b.nodes("Cb", [f"Cb[{r}]" for r in range(3)])
    g = b.groups
    b.clique(ca)
    b.clique(cb)
    for r in range(3):
        for t in range(3):
            if r != t:
                b.edge(ca[r], cb[t])
    # bit nodes of X1 hang off C^1, those of X2 off C^2
    for side, c in (("A", ca), ("B", cb)):
        for l in (1, 2):
            for pol in "FT":
                for u in g[f"{pol}_{side}{l}"]:
                    b.edge(u, c[l])
    for s in SETS:
        plain, bar, dbar = g[s], g[f"{s}'"], g[f"{s}''"]
        for i in range(k):
            b.edge(plain[i], bar[i])
            b.edge(bar[i], dbar[i])
        for i in range(k - 1):
            b.edge(dbar[i], bar[i + 1])
        c = ca if s[0] == "A" else cb
        # X1 uses (C^2 on plain, C^1 on double-bar); X2 swaps the roles
        hi, lo = (c[2], c[1]) if s[1] == "1" else (c[1], c[2])
        for i in range(k):
            b.edge(hi, plain[i])
            b.edge(lo, dbar[i])
        b.edge(hi, bar[0])
        b.edge(hi, dbar[k - 1])
    _input_edges(b, k, x, y)
    gr = b.graph()
    a_side = [
        u
        for s in ("A1", "A2")
        for grp in (s, f"F_{s}", f"T_{s}", f"{s}'", f"{s}''")
        for u in g[grp]
    ] + ca
    return LowerBoundInstance(
        COLORING3, gr, Partition.from_sets(gr.n, a_side), {"k": k, "logk": logk, "c": 3}, x, y, b.groups
    )


def construct_3coloring(inst: LowerBoundInstance, i: int, j: int) -> list[int]:
    """Explicit proper 3-coloring when ``x`` and ``y`` share a 1 at ``(i, j)``.

    Color r is the color of the triangle node C^r. The unique color-0 node of
    X1 is index i and of X2 is index j; bit nodes adjacent to those get the
    color left over by the triangle they hang from, the rest get 0, and the
    bar paths alternate around the chosen index.
    """
    if inst.kind != COLORING3:
        raise InputError(f"expected a COLORING3 instance, got {inst.kind}")
    k = inst.params["k"]
    if not (inst.x[k * i + j] == inst.y[k * i + j] == 1):
        raise InputError(f"x and y do not share a 1 at ({i},{j})")
    g = inst.groups
    col = [-1] * inst.n
    for r in range(3):
        col[g["Ca"][r]] = r
        col[g["Cb"][r]] = r
    for s in SETS:
        l = s[1]
        idx = i if l == "1" else j
        # other = color forced on non-chosen plain nodes; hang = color of bit nodes in bin(chosen)
        other, hang = (1, 2) if l == "1" else (2, 1)
        for t, u in enumerate(g[s]):
            col[u] = 0 if t == idx else other
        chosen = set(bin_nodes(inst, s, idx))
        for pol in "FT":
            for u in g[f"{pol}_{s}"]:
                col[u] = hang if u in chosen else 0
        for t, u in enumerate(g[f"{s}'"]):
            col[u] = other if t == idx else (0 if t < idx else hang)
        for t, u in enumerate(g[f"{s}''"]):
            col[u] = hang if t < idx else 0
    return col


def extend_coloring_c(inst: LowerBoundInstance, c: int) -> LowerBoundInstance:
    """Add c-3 universal nodes per side so that c-colorable iff 3-colorable."""
    if inst.kind != COLORING3:
        raise InputError(f"expected a COLORING3 instance, got {inst.kind}")
    if c < 3:
        raise InputError(f"c must be >= 3, got {c}")
    g0 = inst.graph
    labels = list(g0.labels)
    edges = g0.edges()
    side = list(inst.partition.side)
    groups = {name: list(ids) for name, ids in inst.groups.items()}
    groups["Ca_extra"], groups["Cb_extra"] = [], []
    for who in "ab":
        for r in range(3, c):
            u = len(labels)
            labels.append(f"C{who}[{r}]")
            s = "A" if who == "a" else "B"
            edges += [(v, u, 1) for v in range(u) if side[v] == s]
            if who == "b":
                edges += [(v, u, 1) for v in groups["Ca"]]
            side.append(s)
            groups[f"C{who}_extra"].append(u)
    g = Graph(len(labels), edges, labels)
    params = dict(inst.params, c=c)
    return LowerBoundInstance(COLORING_C, g, Partition(tuple(side)), params, inst.x, inst.y, groups)


def build_coloring_c(k: int, c: int, x, y) -> LowerBoundInstance:
    return extend_coloring_c(build_coloring3(k, x, y), c)


def build_approx_coloring(k: int, c: int, x, y) -> LowerBoundInstance:
    """c copies of the 3-coloring gadget, A-sides and B-sides joined across copies."""
    if c < 1:
        raise InputError(f"c must be >= 1, got {c}")
    base = build_coloring3(k, x, y)
    if c == 1:
        return LowerBoundInstance(
            COLORING_APPROX, base.graph, base.partition, dict(base.params, c=1, copies=1), base.x, base.y, base.groups
        )
    nb = base.n
    labels, edges, side = [], [], []
    groups: dict[str, list[int]] = {}
    for r in range(c):
        off = r * nb
        labels += [f"G{r}:{s}" for s in base.graph.labels]
        edges += [(u + off, v + off, w) for u, v, w in base.graph.edges()]
        side += list(base.partition.side)
        for name, ids in base.groups.items():
            groups[f"G{r}:{name}"] = [u + off for u in ids]
    for s in "AB":
        blocks = [[u + r * nb for u in base.partition.nodes(s)] for r in range(c)]
        for r, t in combinations(range(c), 2):
            edges += [(u, v, 1) for u in blocks[r] for v in blocks[t]]
    g = Graph(c * nb, edges, labels)
    params = dict(base.params, c=c, copies=c)
    return LowerBoundInstance(COLORING_APPROX, g, Partition(tuple(side)), params, base.x, base.y, groups)


# -- weighted 8-cycles -----------------------------------------------------------

def cycle_target(k: int) -> int:
    return 2 * k**3


def build_weighted_cycle(k: int, x, y) -> LowerBoundInstance:
    if k < 3:
        raise InputError(f"k must be >= 3, got {k}")
    x, y = _check_pair_inputs(k, x, y)
    b = _Builder()
    for s in SETS:
        b.nodes(s, [f"{s}[{i}]" for i in range(k)])
    centers = {}
    for s in SETS:
        (centers[s],) = b.nodes(f"c{s}", [f"c{s}"])
    g = b.groups
    for s in SETS:
        for u in g[s]:
            b.edge(centers[s], u, 0)
    b.edge(centers["A1"], centers["B1"], 0)
    b.edge(centers["A2"], centers["B2"], 0)
    k3 = k**3
    input_edges = []
    for i in range(k):
        for j in range(k):
            if x[k * i + j]:
                b.edge(g["A1"][i], g["A2"][j], k3 + k * i + j)
                input_edges.append((g["A1"][i], g["A2"][j]))
            if y[k * i + j]:
                b.edge(g["B1"][i], g["B2"][j], k3 - (k * i + j))
                input_edges.append((g["B1"][i], g["B2"][j]))
    gr = b.graph()
    a_side = g["A1"] + g["A2"] + [centers["A1"], centers["A2"]]
    params = {"k": k, "W": cycle_target(k), "W_max": k3 + k * k - 1}
    groups = dict(b.groups, input_edges=sorted(tuple(sorted(e)) for e in input_edges))
    return LowerBoundInstance(CYCLE8, gr, Partition.from_sets(gr.n, a_side), params, x, y, groups)


def input_edge_set(inst: LowerBoundInstance) -> set[tuple[int, int]]:
    """Edges of the cycle gadget running A1-A2 or B1-B2, present or not in the graph."""
    g = inst.groups
    out = set()
    for p, q in (("A1", "A2"), ("B1", "B2")):
        for u in g[p]:
            for v in g[q]:
                out.add((min(u, v), max(u, v)))
    return out


# -- identical subgraphs ---------------------------------------------------------

def pairs(k: int) -> list[tuple[int, int]]:
    """Index pairs ``i < j`` in lexicographic order (the weight-vector order)."""
    return list(combinations(range(k), 2))


def default_weight_bound(k: int) -> int:
    return (2 * k) ** 2


def build_identical_subgraphs(k: int, x: Sequence[int], y: Sequence[int], W: int | None = None) -> LowerBoundInstance:
    """Two weighted k-cliques joined by the zero-weight edge (a_0, b_0)."""
    if k < 2:
        raise InputError(f"k must be >= 2, got {k}")
    W = default_weight_bound(k) if W is None else W
    ps = pairs(k)
    x, y = tuple(int(v) for v in x), tuple(int(v) for v in y)
    for name, vec in (("x", x), ("y", y)):
        if len(vec) != len(ps):
            raise InputError(f"{name} must give {len(ps)} weights, got {len(vec)}")
        bad = [v for v in vec if not 0 <= v < W]
        if bad:
            raise InputError(f"{name} has weights outside [0, {W - 1}]: {bad[:3]}")
    b = _Builder()
    a = b.nodes("A", [f"a[{i}]" for i in range(k)])
    bb = b.nodes("B", [f"b[{i}]" for i in range(k)])
    for (i, j), wx, wy in zip(ps, x, y):
        b.edge(a[i], a[j], wx)
        b.edge(bb[i], bb[j], wy)
    b.edge(a[0], bb[0], 0)
    g = b.graph()
    return LowerBoundInstance(
        IDENTICAL, g, Partition.from_sets(g.n, a), {"k": k, "W": W, "W_max": W - 1}, x, y, b.groups
    )


# -- weighted APSP star ------------------------------------------------------------

def star_batch_bits(n: int) -> int:
    return max(1, math.ceil(math.log2(n)))


def build_apsp_star(n: int, x) -> LowerBoundInstance:
    """Nodes a_0..a_{n-3} hang off ``a``; ``a``-``b`` has weight 0; batch i of x weights (a_i, a)."""
    if n < 3:
        raise InputError(f"n must be >= 3, got {n}")
    x = bits(x)
    L = star_batch_bits(n)
    if len(x) != (n - 2) * L:
        raise InputError(f"x must have (n-2)*{L}={(n - 2) * L} bits, got {len(x)}")
    b = _Builder()
    leaves = b.nodes("A", [f"a[{i}]" for i in range(n - 2)])
    (hub,) = b.nodes("a", ["a"])
    (far,) = b.nodes("b", ["b"])
    for i, u in enumerate(leaves):
        b.edge(u, hub, decode_batch(x[i * L:(i + 1) * L]))
    b.edge(hub, far, 0)
    g = b.graph()
    params = {"n": n, "L": L, "W_max": (1 << L) - 1}
    return LowerBoundInstance(APSP_STAR, g, Partition.from_sets(n, leaves + [hub]), params, x, None, b.groups)


def decode_batch(chunk: Sequence[int]) -> int:
    """Batch read as a binary numeral, most significant bit first."""
    v = 0
    for bit in chunk:
        v = 2 * v + bit
    return v


def encode_batch(value: int, L: int) -> Bits:
    return tuple((value >> (L - 1 - t)) & 1 for t in range(L))


def decode_star_row(inst: LowerBoundInstance, row: Sequence) -> Bits:
    """Recover x from b's distance row: dist(b, a_i) is exactly batch i."""
    L = inst.params["L"]
    out: list[int] = []
    for u in inst.groups["A"]:
        out.extend(encode_batch(int(row[u]), L))
    return tuple(out)
