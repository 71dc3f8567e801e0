"""Pure-Python hot kernels. Same contracts as the compiled ``_ckernels``.

All inputs are plain ``(n, edges)`` with ``edges`` a list of ``(u, v, w)``.
Bitsets are Python ints, so there is no node-count limit here.
"""

from __future__ import annotations

import math

INF = math.inf


def floyd_warshall(n, edges):
    d = [[INF] * n for _ in range(n)]
    for i in range(n):
        d[i][i] = 0
    for u, v, w in edges:
        if w < d[u][v]:
            d[u][v] = d[v][u] = w
    for k in range(n):
        dk = d[k]
        for i in range(n):
            dik = d[i][k]
            if dik == INF:
                continue
            di = d[i]
            for j in range(n):
                nd = dik + dk[j]
                if nd < di[j]:
                    di[j] = nd
    return d


def _masks(n, edges):
    adj = [0] * n
    for u, v, _ in edges:
        adj[u] |= 1 << v
        adj[v] |= 1 << u
    return adj


def _clique_cover_bound(adj, alive):
    # Greedy partition into cliques; a clique of size q needs q-1 cover nodes.
    lb = 0
    rem = alive
    while rem:
        v = (rem & -rem).bit_length() - 1
        rem &= ~(1 << v)
        cand = adj[v] & rem
        while cand:
            u = (cand & -cand).bit_length() - 1
            rem &= ~(1 << u)
            cand &= adj[u]
            lb += 1
    return lb


def min_vertex_cover(n, edges, budget):
    """Smallest cover of size <= budget as ``(size, nodes)``, else ``None``."""
    adj = _masks(n, edges)
    best = [budget + 1, None]

    def rec(alive, chosen, size):
        while True:
            if size >= best[0]:
                return
            changed = False
            a = alive
            while a:
                v = (a & -a).bit_length() - 1
                a &= a - 1
                nb = adj[v] & alive
                if nb == 0:
                    alive &= ~(1 << v)
                    changed = True
                elif nb & (nb - 1) == 0:
                    chosen |= nb
                    size += 1
                    alive &= ~(nb | (1 << v))
                    changed = True
                    break
            if not changed:
                break
        if size >= best[0]:
            return
        if not alive:
            best[0], best[1] = size, chosen
            return
        if size + _clique_cover_bound(adj, alive) >= best[0]:
            return
        bv, bd = -1, -1
        a = alive
        while a:
            v = (a & -a).bit_length() - 1
            a &= a - 1
            d = (adj[v] & alive).bit_count()
            if d > bd:
                bv, bd = v, d
        bit = 1 << bv
        rec(alive & ~bit, chosen | bit, size + 1)
        nb = adj[bv] & alive
        rec(alive & ~bit & ~nb, chosen | nb, size + bd)

    rec((1 << n) - 1, 0, 0)
    if best[1] is None:
        return None
    cover = [u for u in range(n) if best[1] >> u & 1]
    return best[0], cover


def color(n, edges, c, precolor):
    """A proper coloring with colors ``0..c-1`` extending ``precolor``, or ``None``.

    ``precolor`` must use colors ``0..q-1`` on a clique (symmetry breaking):
    unused colors are interchangeable, so only the lowest one is ever tried.
    """
    adj = [[] for _ in range(n)]
    for u, v, _ in edges:
        adj[u].append(v)
        adj[v].append(u)
    full = (1 << c) - 1
    col = [-1] * n
    dom = [full] * n
    used = 0
    for v, k in precolor.items():
        if k >= c or not dom[v] >> k & 1:
            return None
        col[v] = k
        used = max(used, k + 1)
        for u in adj[v]:
            dom[u] &= ~(1 << k)
            if col[u] < 0 and dom[u] == 0:
                return None
    left = [v for v in range(n) if col[v] < 0]
    deg = [len(a) for a in adj]

    def rec(left, used):
        if not left:
            return True
        bi, bv, bp = 0, left[0], c + 1
        for i, v in enumerate(left):
            p = dom[v].bit_count()
            if p < bp or (p == bp and deg[v] > deg[bv]):
                bi, bv, bp = i, v, p
        if bp == 0:
            return False
        rest = left[:bi] + left[bi + 1:]
        d = dom[bv]
        while d:
            k = (d & -d).bit_length() - 1
            d &= d - 1
            if k > used:
                break
            bit = 1 << k
            trail = []
            ok = True
            for u in adj[bv]:
                if col[u] < 0 and dom[u] & bit:
                    dom[u] &= ~bit
                    trail.append(u)
                    if dom[u] == 0:
                        ok = False
                        break
            if ok:
                col[bv] = k
                if rec(rest, max(used, k + 1)):
                    return True
                col[bv] = -1
            for u in trail:
                dom[u] |= bit
        return False

    if rec(left, used):
        return col
    return None


def cycles8(n, edges, target, limit):
    """Simple 8-node cycles of total weight ``target``, at most ``limit`` of them.

    Each cycle is reported once, rotated to start at its smallest node and
    oriented so the second node is smaller than the last.
    """
    adj = [[] for _ in range(n)]
    wt = {}
    for u, v, w in edges:
        adj[u].append(v)
        adj[v].append(u)
        wt[u, v] = wt[v, u] = w
    for a in adj:
        a.sort()
    out = []
    path = [0] * 8
    on = [False] * n

    def dfs(depth, acc):
        u = path[depth - 1]
        s = path[0]
        if depth == 8:
            w = wt.get((u, s))
            if w is not None and acc + w == target and path[1] < path[7]:
                out.append(tuple(path))
            return len(out) >= limit
        for v in adj[u]:
            if v <= s or on[v]:
                continue
            nacc = acc + wt[u, v]
            if nacc > target:
                continue
            path[depth] = v
            on[v] = True
            stop = dfs(depth + 1, nacc)
            on[v] = False
            if stop:
                return True
        return False

    for s in range(n):
        path[0] = s
        on[s] = True
        stop = dfs(1, 0)
        on[s] = False
        if stop:
            break
    return out
