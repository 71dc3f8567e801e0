# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels. Contracts mirror ``_pykernels`` exactly.

The vertex-cover search uses 64-bit masks and therefore handles n <= 64;
``_kernels`` routes larger graphs to the Python fallback.
"""

import math

import numpy as np
cimport numpy as cnp
from libc.stdint cimport int64_t, uint64_t
from libc.stdlib cimport free, malloc

cnp.import_array()

cdef int64_t BIG = 1 << 62
INF = math.inf

cdef extern from *:
    int popcount64 "__builtin_popcountll"(unsigned long long) nogil
    int ctz64 "__builtin_ctzll"(unsigned long long) nogil

MAX_VC_NODES = 64


def floyd_warshall(int n, edges):
    cdef cnp.ndarray[int64_t, ndim=2] arr = np.full((n, n), BIG, dtype=np.int64)
    cdef int64_t[:, ::1] d = arr
    cdef int i, j, k
    cdef int64_t dik, nd
    for i in range(n):
        d[i, i] = 0
    for u, v, w in edges:
        if w < d[u, v]:
            d[u, v] = w
            d[v, u] = w
    with nogil:
        for k in range(n):
            for i in range(n):
                dik = d[i, k]
                if dik >= BIG:
                    continue
                for j in range(n):
                    if d[k, j] >= BIG:
                        continue
                    nd = dik + d[k, j]
                    if nd < d[i, j]:
                        d[i, j] = nd
    rows = arr.tolist()
    for r in rows:
        for j in range(n):
            if r[j] >= BIG:
                r[j] = INF
    return rows


# ---------------------------------------------------------------- vertex cover

cdef struct VCState:
    uint64_t* adj
    int n
    int best
    uint64_t best_set


cdef int _clique_cover_bound(uint64_t* adj, uint64_t alive) noexcept nogil:
    cdef int lb = 0
    cdef uint64_t rem = alive, cand
    cdef int v, u
    while rem:
        v = ctz64(rem)
        rem &= rem - 1
        cand = adj[v] & rem
        while cand:
            u = ctz64(cand)
            rem &= ~((<uint64_t>1) << u)
            cand &= adj[u]
            lb += 1
    return lb


cdef void _vc_rec(VCState* st, uint64_t alive, uint64_t chosen, int size) noexcept nogil:
    cdef uint64_t a, nb, bit
    cdef int v, d, bv, bd
    cdef bint changed
    while True:
        if size >= st.best:
            return
        changed = False
        a = alive
        while a:
            v = ctz64(a)
            a &= a - 1
            nb = st.adj[v] & alive
            if nb == 0:
                alive &= ~((<uint64_t>1) << v)
                changed = True
            elif (nb & (nb - 1)) == 0:
                chosen |= nb
                size += 1
                alive &= ~(nb | ((<uint64_t>1) << v))
                changed = True
                break
        if not changed:
            break
    if size >= st.best:
        return
    if alive == 0:
        st.best = size
        st.best_set = chosen
        return
    if size + _clique_cover_bound(st.adj, alive) >= st.best:
        return
    bv = -1
    bd = -1
    a = alive
    while a:
        v = ctz64(a)
        a &= a - 1
        d = popcount64(st.adj[v] & alive)
        if d > bd:
            bv = v
            bd = d
    bit = (<uint64_t>1) << bv
    _vc_rec(st, alive & ~bit, chosen | bit, size + 1)
    nb = st.adj[bv] & alive
    _vc_rec(st, alive & ~bit & ~nb, chosen | nb, size + bd)


def min_vertex_cover(int n, edges, int budget):
    if n > MAX_VC_NODES:
        raise ValueError("compiled vertex-cover kernel supports n <= 64")
    cdef uint64_t adj[64]
    cdef VCState st
    cdef int i
    cdef uint64_t alive
    for i in range(64):
        adj[i] = 0
    for u, v, _ in edges:
        adj[u] |= (<uint64_t>1) << v
        adj[v] |= (<uint64_t>1) << u
    st.adj = adj
    st.n = n
    st.best = budget + 1
    st.best_set = 0
    alive = ((<uint64_t>1) << n) - 1 if n < 64 else <uint64_t>0xFFFFFFFFFFFFFFFF
    if n == 0:
        alive = 0
    with nogil:
        _vc_rec(&st, alive, 0, 0)
    if st.best > budget:
        return None
    return st.best, [u for u in range(n) if (st.best_set >> u) & 1]


# -------------------------------------------------------------------- coloring

cdef struct ColState:
    int n
    int c
    int* off
    int* nbr
    int* deg
    int* col
    uint64_t* dom
    int* left
    int* trail


cdef bint _col_rec(ColState* st, int nleft, int used, int tpos) noexcept nogil:
    cdef int i, bi, v, bv, p, bp, k, u, j, t
    cdef uint64_t d, bit
    cdef bint ok
    if nleft == 0:
        return True
    bi = 0
    bv = st.left[0]
    bp = st.c + 1
    for i in range(nleft):
        v = st.left[i]
        p = popcount64(st.dom[v])
        if p < bp or (p == bp and st.deg[v] > st.deg[bv]):
            bi = i
            bv = v
            bp = p
    if bp == 0:
        return False
    # move the chosen node to the end of the active prefix
    st.left[bi] = st.left[nleft - 1]
    st.left[nleft - 1] = bv
    d = st.dom[bv]
    while d:
        k = ctz64(d)
        d &= d - 1
        if k > used:
            break
        bit = (<uint64_t>1) << k
        t = tpos
        ok = True
        for j in range(st.off[bv], st.off[bv + 1]):
            u = st.nbr[j]
            if st.col[u] < 0 and (st.dom[u] & bit):
                st.dom[u] &= ~bit
                st.trail[t] = u
                t += 1
                if st.dom[u] == 0:
                    ok = False
                    break
        if ok:
            st.col[bv] = k
            if _col_rec(st, nleft - 1, used if used > k + 1 else k + 1, t):
                return True
            st.col[bv] = -1
        for j in range(tpos, t):
            st.dom[st.trail[j]] |= bit
    st.left[nleft - 1] = st.left[bi]
    st.left[bi] = bv
    return False


def color(int n, edges, int c, precolor):
    cdef ColState st
    cdef int m2, i, j, v, k, u, nleft, used = 0
    cdef uint64_t full
    cdef bint ok
    if c > 64:
        raise ValueError("compiled coloring kernel supports c <= 64")
    full = ((<uint64_t>1) << c) - 1 if c < 64 else <uint64_t>0xFFFFFFFFFFFFFFFF
    adj = [[] for _ in range(n)]
    for eu, ev, _ in edges:
        adj[eu].append(ev)
        adj[ev].append(eu)
    m2 = sum(len(a) for a in adj)
    st.n = n
    st.c = c
    st.off = <int*>malloc((n + 1) * sizeof(int))
    st.nbr = <int*>malloc((m2 + 1) * sizeof(int))
    st.deg = <int*>malloc((n + 1) * sizeof(int))
    st.col = <int*>malloc((n + 1) * sizeof(int))
    st.dom = <uint64_t*>malloc((n + 1) * sizeof(uint64_t))
    st.left = <int*>malloc((n + 1) * sizeof(int))
    # each node removes each color from each neighbor at most once per branch depth
    st.trail = <int*>malloc((m2 + 1) * sizeof(int))
    try:
        j = 0
        for v in range(n):
            st.off[v] = j
            st.deg[v] = len(adj[v])
            st.col[v] = -1
            st.dom[v] = full
            for au in adj[v]:
                st.nbr[j] = au
                j += 1
        st.off[n] = j
        for pv, pk in precolor.items():
            v = pv
            k = pk
            if k >= c or not ((st.dom[v] >> k) & 1):
                return None
            st.col[v] = k
            if k + 1 > used:
                used = k + 1
            for j in range(st.off[v], st.off[v + 1]):
                u = st.nbr[j]
                st.dom[u] &= ~((<uint64_t>1) << k)
                if st.col[u] < 0 and st.dom[u] == 0:
                    return None
        nleft = 0
        for v in range(n):
            if st.col[v] < 0:
                st.left[nleft] = v
                nleft += 1
        with nogil:
            ok = _col_rec(&st, nleft, used, 0)
        if not ok:
            return None
        return [st.col[v] for v in range(n)]
    finally:
        free(st.off)
        free(st.nbr)
        free(st.deg)
        free(st.col)
        free(st.dom)
        free(st.left)
        free(st.trail)


# ---------------------------------------------------------------- 8-cycles

cdef struct CycState:
    int* off
    int* nbr
    int64_t* w
    int64_t target
    int limit
    int found
    int* path
    char* on
    int* out


cdef bint _cyc_dfs(CycState* st, int depth, int64_t acc) noexcept nogil:
    cdef int u = st.path[depth - 1]
    cdef int s = st.path[0]
    cdef int j, v, q
    cdef int64_t nacc
    if depth == 8:
        for j in range(st.off[u], st.off[u + 1]):
            if st.nbr[j] == s:
                if acc + st.w[j] == st.target and st.path[1] < st.path[7]:
                    for q in range(8):
                        st.out[st.found * 8 + q] = st.path[q]
                    st.found += 1
                break
        return st.found >= st.limit
    for j in range(st.off[u], st.off[u + 1]):
        v = st.nbr[j]
        if v <= s or st.on[v]:
            continue
        nacc = acc + st.w[j]
        if nacc > st.target:
            continue
        st.path[depth] = v
        st.on[v] = 1
        if _cyc_dfs(st, depth + 1, nacc):
            st.on[v] = 0
            return True
        st.on[v] = 0
    return False


def cycles8(int n, edges, target, int limit):
    cdef CycState st
    cdef int m2, j, s, v
    cdef int path[8]
    if limit <= 0:
        return []
    adj = [[] for _ in range(n)]
    for eu, ev, ew in edges:
        adj[eu].append((ev, ew))
        adj[ev].append((eu, ew))
    for a in adj:
        a.sort()
    m2 = sum(len(a) for a in adj)
    st.off = <int*>malloc((n + 1) * sizeof(int))
    st.nbr = <int*>malloc((m2 + 1) * sizeof(int))
    st.w = <int64_t*>malloc((m2 + 1) * sizeof(int64_t))
    st.on = <char*>malloc(n + 1)
    st.out = <int*>malloc(limit * 8 * sizeof(int))
    st.path = path
    st.target = target
    st.limit = limit
    st.found = 0
    try:
        j = 0
        for v in range(n):
            st.off[v] = j
            st.on[v] = 0
            for au, aw in adj[v]:
                st.nbr[j] = au
                st.w[j] = aw
                j += 1
        st.off[n] = j
        with nogil:
            for s in range(n):
                st.path[0] = s
                st.on[s] = 1
                if _cyc_dfs(&st, 1, 0):
                    st.on[s] = 0
                    break
                st.on[s] = 0
        return [tuple(st.out[q * 8 + r] for r in range(8)) for q in range(st.found)]
    finally:
        free(st.off)
        free(st.nbr)
        free(st.w)
        free(st.on)
        free(st.out)
