"""Undirected weighted graphs, partitions, cuts and exact all-pairs distances.

Nodes are dense integers ``0..n-1``. Every graph is immutable once built;
derived graphs (induced subgraphs, graphs with extra edges) are new objects.
Distances are exact integers, with :data:`INF` marking unreachable pairs.
"""

from __future__ import annotations

import json
import math
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from . import _kernels

INF = math.inf
"""Distance between nodes in different components. Never an edge weight."""

SIDES = ("A", "B")


class GraphError(ValueError):
    """Malformed graph, partition or weight."""


def _key(u: int, v: int) -> tuple[int, int]:
    return (u, v) if u < v else (v, u)


class Graph:
    """Simple undirected graph with non-negative integer edge weights.

    ``labels`` optionally maps node ids to human-readable gadget names such as
    ``"A1[3]"`` or ``"F_A2[1]"``; they only matter for serialization and
    error messages.
    """

    __slots__ = ("n", "_w", "_adj", "labels")

    def __init__(
        self,
        n: int,
        edges: Iterable[tuple[int, int] | tuple[int, int, int]] = (),
        labels: Sequence[str] | None = None,
    ):
        if n < 0:
            raise GraphError("negative node count")
        self.n = n
        w: dict[tuple[int, int], int] = {}
        adj: list[list[int]] = [[] for _ in range(n)]
        for e in edges:
            u, v = e[0], e[1]
            wt = e[2] if len(e) > 2 else 1
            if not (0 <= u < n and 0 <= v < n):
                raise GraphError(f"edge ({u},{v}) out of range for n={n}")
            if u == v:
                raise GraphError(f"self-loop at {u}")
            if not isinstance(wt, int) or isinstance(wt, bool):
                raise GraphError(f"edge ({u},{v}) weight must be an int, got {wt!r}")
            if wt < 0:
                raise GraphError(f"negative weight {wt} on edge ({u},{v})")
            k = _key(u, v)
            if k in w:
                raise GraphError(f"parallel edge {k}")
            w[k] = wt
            adj[u].append(v)
            adj[v].append(u)
        for a in adj:
            a.sort()
        self._w = w
        self._adj = tuple(tuple(a) for a in adj)
        if labels is not None and len(labels) != n:
            raise GraphError("labels must name every node")
        self.labels = tuple(labels) if labels is not None else tuple(str(i) for i in range(n))

    # -- queries -------------------------------------------------------------
    def neighbors(self, u: int) -> tuple[int, ...]:
        return self._adj[u]

    def degree(self, u: int) -> int:
        return len(self._adj[u])

    def has_edge(self, u: int, v: int) -> bool:
        return _key(u, v) in self._w

    def weight(self, u: int, v: int) -> int:
        try:
            return self._w[_key(u, v)]
        except KeyError:
            raise GraphError(f"no edge ({u},{v})") from None

    def edges(self) -> list[tuple[int, int, int]]:
        """All edges as ``(u, v, w)`` with ``u < v``, sorted."""
        return sorted((u, v, w) for (u, v), w in self._w.items())

    def edge_set(self) -> frozenset[tuple[int, int]]:
        return frozenset(self._w)

    @property
    def m(self) -> int:
        return len(self._w)

    @property
    def max_weight(self) -> int:
        return max(self._w.values(), default=0)

    def label(self, u: int) -> str:
        return self.labels[u]

    def index_of(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise KeyError(label) from None

    # -- derivations ---------------------------------------------------------
    def with_edges(self, extra: Iterable[tuple[int, int, int]]) -> "Graph":
        return Graph(self.n, self.edges() + list(extra), self.labels)

    def without_edges(self, drop: Iterable[tuple[int, int]]) -> "Graph":
        gone = {_key(u, v) for u, v in drop}
        return Graph(self.n, [e for e in self.edges() if (e[0], e[1]) not in gone], self.labels)

    def induced(self, nodes: Iterable[int]) -> tuple["Graph", list[int]]:
        """Induced subgraph, relabelled densely. Returns it with the old ids."""
        keep = sorted(set(nodes))
        pos = {u: i for i, u in enumerate(keep)}
        es = [(pos[u], pos[v], w) for u, v, w in self.edges() if u in pos and v in pos]
        return Graph(len(keep), es, [self.labels[u] for u in keep]), keep

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self.n == other.n and self._w == other._w

    def __hash__(self) -> int:
        return hash((self.n, frozenset(self._w.items())))

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.m})"


@dataclass(frozen=True)
class Partition:
    """Total assignment of nodes to sides ``"A"`` (Alice) and ``"B"`` (Bob)."""

    side: tuple[str, ...]

    def __post_init__(self):
        bad = [s for s in self.side if s not in SIDES]
        if bad:
            raise GraphError(f"unknown side(s) {sorted(set(bad))}")

    @classmethod
    def from_sets(cls, n: int, a_nodes: Iterable[int]) -> "Partition":
        a = set(a_nodes)
        return cls(tuple("A" if u in a else "B" for u in range(n)))

    def nodes(self, s: str) -> list[int]:
        return [u for u, x in enumerate(self.side) if x == s]

    def __len__(self) -> int:
        return len(self.side)

    def __getitem__(self, u: int) -> str:
        return self.side[u]


@dataclass(frozen=True)
class Cut:
    """Edges crossing a partition, plus the endpoint sets touching them."""

    edges: frozenset[tuple[int, int]]
    side_a: frozenset[int] = field(default_factory=frozenset)
    side_b: frozenset[int] = field(default_factory=frozenset)

    @property
    def nodes(self) -> frozenset[int]:
        return self.side_a | self.side_b

    def __len__(self) -> int:
        return len(self.edges)

    def __iter__(self):
        return iter(sorted(self.edges))


def _check_total(g: Graph, p: Partition | Sequence) -> None:
    if len(p) != g.n:
        raise GraphError(f"partition covers {len(p)} of {g.n} nodes")


def cut_edges(g: Graph, p: Partition) -> Cut:
    _check_total(g, p)
    es = set()
    ca, cb = set(), set()
    for u, v, _ in g.edges():
        if p[u] != p[v]:
            es.add((u, v))
            for x in (u, v):
                (ca if p[x] == "A" else cb).add(x)
    return Cut(frozenset(es), frozenset(ca), frozenset(cb))


def multiway_cut(g: Graph, blocks: Sequence[int]) -> tuple[frozenset[tuple[int, int]], frozenset[int]]:
    """Cut edges and cut nodes of a t-way partition given as a block id per node."""
    _check_total(g, blocks)
    es = frozenset((u, v) for u, v, _ in g.edges() if blocks[u] != blocks[v])
    return es, frozenset(x for e in es for x in e)


def components(g: Graph) -> list[list[int]]:
    seen = [False] * g.n
    comps = []
    for s in range(g.n):
        if seen[s]:
            continue
        seen[s] = True
        comp, q = [s], deque([s])
        while q:
            u = q.popleft()
            for v in g.neighbors(u):
                if not seen[v]:
                    seen[v] = True
                    comp.append(v)
                    q.append(v)
        comps.append(sorted(comp))
    return comps


def is_connected(g: Graph) -> bool:
    return g.n <= 1 or len(components(g)) == 1


def bfs_depths(g: Graph, root: int) -> list[float]:
    depth: list[float] = [INF] * g.n
    depth[root] = 0
    q = deque([root])
    while q:
        u = q.popleft()
        for v in g.neighbors(u):
            if depth[v] == INF:
                depth[v] = depth[u] + 1
                q.append(v)
    return depth


def diameter(g: Graph) -> float:
    """Unweighted (hop) diameter; INF if disconnected."""
    return max((max(bfs_depths(g, u)) for u in range(g.n)), default=0)


class DistanceMatrix:
    """Dense symmetric matrix of exact distances, ``INF`` for unreachable."""

    __slots__ = ("rows",)

    def __init__(self, rows: list[list[int | float]]):
        self.rows = rows

    @property
    def n(self) -> int:
        return len(self.rows)

    def __getitem__(self, uv: tuple[int, int]) -> int | float:
        u, v = uv
        return self.rows[u][v]

    def row(self, u: int) -> list[int | float]:
        return self.rows[u]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, DistanceMatrix):
            return NotImplemented
        return self.rows == other.rows

    def __repr__(self) -> str:
        return f"DistanceMatrix(n={self.n})"


def apsp_exact(g: Graph) -> DistanceMatrix:
    """Exact weighted all-pairs shortest paths (Floyd-Warshall)."""
    for u, v, w in g.edges():
        if w < 0:
            raise GraphError(f"negative weight on ({u},{v})")
    return DistanceMatrix(_kernels.floyd_warshall(g.n, g.edges()))


# -- serialization -------------------------------------------------------------

def graph_to_dict(g: Graph, p: Partition | None = None, **extra) -> dict:
    d = {
        "n": g.n,
        "edges": [list(e) for e in g.edges()],
        "labels": {str(i): s for i, s in enumerate(g.labels)},
    }
    if p is not None:
        d["partition"] = {str(i): s for i, s in enumerate(p.side)}
    d.update(extra)
    return d


def graph_from_dict(d: Mapping) -> tuple[Graph, Partition | None]:
    n = int(d["n"])
    labels = None
    if "labels" in d:
        labels = [d["labels"].get(str(i), str(i)) for i in range(n)]
    g = Graph(n, [tuple(int(x) for x in e) for e in d["edges"]], labels)
    p = None
    if d.get("partition") is not None:
        part = d["partition"]
        missing = [i for i in range(n) if str(i) not in part]
        if missing:
            raise GraphError(f"partition misses nodes {missing[:5]}")
        p = Partition(tuple(part[str(i)] for i in range(n)))
    return g, p


def dumps(g: Graph, p: Partition | None = None, **extra) -> str:
    return json.dumps(graph_to_dict(g, p, **extra), sort_keys=True)


def to_dot(g: Graph, p: Partition | None = None, name: str = "G") -> str:
    """Graphviz source; cut edges are drawn bold red."""
    lines = [f"graph {name} {{"]
    for u in range(g.n):
        attrs = [f'label="{g.labels[u]}"']
        if p is not None:
            attrs.append("shape=box" if p[u] == "A" else "shape=ellipse")
        lines.append(f"  {u} [{', '.join(attrs)}];")
    for u, v, w in g.edges():
        attrs = [f'label="{w}"']
        if p is not None and p[u] != p[v]:
            attrs += ["color=red", "penwidth=2.5", "style=bold"]
        lines.append(f"  {u} -- {v} [{', '.join(attrs)}];")
    lines.append("}")
    return "\n".join(lines) + "\n"
