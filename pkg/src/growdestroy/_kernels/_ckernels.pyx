# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled kernels. Statement-for-statement mirror of ``_pykernels``."""

import numpy as np
cimport numpy as cnp
from libc.stdint cimport uint64_t, int64_t, uint8_t
from libc.stdlib cimport malloc, calloc, free

cnp.import_array()

cdef enum:
    GENERAL = 0
    CENTRAL = 1
    PERIPHERAL = 2


cdef struct Xoshiro:
    uint64_t s0
    uint64_t s1
    uint64_t s2
    uint64_t s3


cdef inline uint64_t _rotl(uint64_t x, int k) nogil:
    return (x << k) | (x >> (64 - k))


cdef inline uint64_t _next(Xoshiro* r) nogil:
    cdef uint64_t result = _rotl(r.s1 * 5, 7) * 9
    cdef uint64_t t = r.s1 << 17
    r.s2 ^= r.s0
    r.s3 ^= r.s1
    r.s1 ^= r.s2
    r.s0 ^= r.s3
    r.s2 ^= t
    r.s3 = _rotl(r.s3, 45)
    return result


cdef inline double _random(Xoshiro* r) nogil:
    return <double>(_next(r) >> 11) * (1.0 / 9007199254740992.0)


cdef inline int64_t _below(Xoshiro* r, int64_t n) nogil:
    cdef int64_t i = <int64_t>(_random(r) * n)
    if i < n:
        return i
    return n - 1


cdef Xoshiro _load(object rng):
    cdef Xoshiro r
    s = rng.getstate()
    r.s0 = <uint64_t>s[0]
    r.s1 = <uint64_t>s[1]
    r.s2 = <uint64_t>s[2]
    r.s3 = <uint64_t>s[3]
    return r


cdef void _store(object rng, Xoshiro* r):
    rng.setstate((r.s0, r.s1, r.s2, r.s3))


cdef struct Fenwick:
    int64_t n
    int64_t top
    double* tree


cdef int _fw_init(Fenwick* f, int64_t n) except -1:
    f.n = n
    f.tree = <double*>calloc(n + 1, sizeof(double))
    if f.tree == NULL:
        raise MemoryError()
    f.top = 1
    while f.top * 2 <= n:
        f.top *= 2
    return 0


cdef inline void _fw_add(Fenwick* f, int64_t i, double delta) nogil:
    i += 1
    while i <= f.n:
        f.tree[i] += delta
        i += i & -i


cdef inline double _fw_total(Fenwick* f) nogil:
    cdef double s = 0.0
    cdef int64_t i = f.n
    while i > 0:
        s += f.tree[i]
        i -= i & -i
    return s


cdef inline int64_t _fw_find(Fenwick* f, double target) nogil:
    cdef int64_t pos = 0
    cdef int64_t step = f.top
    cdef int64_t nxt
    while step:
        nxt = pos + step
        if nxt <= f.n and f.tree[nxt] <= target:
            pos = nxt
            target -= f.tree[nxt]
        step >>= 1
    return pos


def weighted_draws(weights, int64_t n_draws, object rng):
    cdef double[::1] w = np.ascontiguousarray(weights, dtype=np.float64)
    cdef int64_t n = w.shape[0]
    cdef cnp.ndarray[cnp.int64_t, ndim=1] out_arr = np.zeros(n_draws, dtype=np.int64)
    cdef int64_t* out = <int64_t*>out_arr.data
    cdef Fenwick tree
    cdef Xoshiro r = _load(rng)
    cdef int64_t i, k
    cdef double total
    tree.tree = NULL
    try:
        _fw_init(&tree, n)
        for i in range(n):
            _fw_add(&tree, i, w[i])
        total = _fw_total(&tree)
        if not total > 0.0:
            raise ValueError("weights must have a positive sum")
        with nogil:
            for k in range(n_draws):
                while True:
                    i = _fw_find(&tree, _random(&r) * total)
                    if i < n and w[i] > 0.0:
                        break
                out[k] = i
    finally:
        free(tree.tree)
    _store(rng, &r)
    return out_arr


def grow_edges(int64_t n0, int64_t m, double p, bint per_link, object rng):
    cdef int64_t m0 = m + 2
    cdef int64_t n_edges = m0 + (n0 - m0) * m
    cdef cnp.ndarray[cnp.float64_t, ndim=1] fitness_arr = np.zeros(n0, dtype=np.float64)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] edges_arr = np.zeros(2 * n_edges, dtype=np.int64)
    cdef double* fitness = <double*>fitness_arr.data
    cdef int64_t* edges = <int64_t*>edges_arr.data
    cdef int64_t* chosen = <int64_t*>malloc(max(m, 1) * sizeof(int64_t))
    cdef Fenwick ba, fit
    cdef Xoshiro r = _load(rng)
    cdef int64_t i, j, c, e, nch, npos_f = 0, free_pos
    cdef double f, fj, total
    cdef bint mode_ba, dup
    cdef Fenwick* tree
    if chosen == NULL:
        raise MemoryError()
    ba.tree = NULL
    fit.tree = NULL
    try:
        _fw_init(&ba, n0)
        _fw_init(&fit, n0)
        with nogil:
            for i in range(m0):
                f = _random(&r)
                fitness[i] = f
                if f > 0.0:
                    npos_f += 1
            e = 0
            for i in range(m0):
                j = i + 1 if i + 1 < m0 else 0
                edges[e] = i if i < j else j
                edges[e + 1] = j if i < j else i
                e += 2
                _fw_add(&ba, i, 2.0)
                _fw_add(&fit, i, 2.0 * fitness[i])

            for j in range(m0, n0):
                fj = _random(&r)
                fitness[j] = fj
                mode_ba = True
                if not per_link:
                    mode_ba = _random(&r) < p
                nch = 0
                while nch < m:
                    if per_link:
                        mode_ba = _random(&r) < p
                    if not mode_ba and npos_f == 0:
                        mode_ba = True
                    if not mode_ba:
                        free_pos = npos_f
                        for c in range(nch):
                            if fitness[chosen[c]] > 0.0:
                                free_pos -= 1
                        if free_pos == 0:
                            i = _below(&r, j)
                            dup = False
                            for c in range(nch):
                                if chosen[c] == i:
                                    dup = True
                            if not dup:
                                chosen[nch] = i
                                nch += 1
                            continue
                        tree = &fit
                    else:
                        tree = &ba
                    total = _fw_total(tree)
                    i = _fw_find(tree, _random(&r) * total)
                    if i >= j:
                        continue
                    if not mode_ba and fitness[i] == 0.0:
                        continue
                    dup = False
                    for c in range(nch):
                        if chosen[c] == i:
                            dup = True
                    if dup:
                        continue
                    chosen[nch] = i
                    nch += 1
                for c in range(m):
                    i = chosen[c]
                    edges[e] = i
                    edges[e + 1] = j
                    e += 2
                    _fw_add(&ba, i, 1.0)
                    _fw_add(&fit, i, fitness[i])
                _fw_add(&ba, j, <double>m)
                _fw_add(&fit, j, m * fj)
                if fj > 0.0:
                    npos_f += 1
    finally:
        free(chosen)
        free(ba.tree)
        free(fit.tree)
    _store(rng, &r)
    return fitness_arr, edges_arr.reshape(-1, 2)


cdef inline double _weight(int kind, int64_t k) nogil:
    if kind == CENTRAL:
        return <double>k
    if kind == PERIPHERAL:
        return 1.0 / (k + 1.0)
    return 1.0


def attack_order(cnp.int64_t[::1] indptr, cnp.int64_t[::1] indices,
                 cnp.uint8_t[::1] alive_in, int kind, int64_t n_remove,
                 bint recompute, object rng):
    cdef int64_t n = indptr.shape[0] - 1
    cdef cnp.ndarray[cnp.int64_t, ndim=1] removed_arr = np.zeros(n_remove, dtype=np.int64)
    cdef int64_t* removed = <int64_t*>removed_arr.data
    cdef uint8_t* alive = <uint8_t*>malloc(max(n, 1) * sizeof(uint8_t))
    cdef int64_t* deg = <int64_t*>malloc(max(n, 1) * sizeof(int64_t))
    cdef int64_t* live = <int64_t*>malloc(max(n, 1) * sizeof(int64_t))
    cdef int64_t* where = <int64_t*>malloc(max(n, 1) * sizeof(int64_t))
    cdef double* w = <double*>calloc(max(n, 1), sizeof(double))
    cdef Fenwick tree
    cdef bint use_tree = kind != GENERAL
    cdef Xoshiro r = _load(rng)
    cdef int64_t v, u, t, k, nlive = 0, last, wsum_int = 0, rr
    cdef double wv, wu, total
    tree.tree = NULL
    try:
        if alive == NULL or deg == NULL or live == NULL or where == NULL or w == NULL:
            raise MemoryError()
        if use_tree:
            _fw_init(&tree, n)
        with nogil:
            for v in range(n):
                alive[v] = alive_in[v]
                where[v] = -1
            for v in range(n):
                deg[v] = 0
                if alive[v]:
                    for t in range(indptr[v], indptr[v + 1]):
                        if alive[indices[t]]:
                            deg[v] += 1
            for v in range(n):
                if alive[v]:
                    live[nlive] = v
                    where[v] = nlive
                    nlive += 1
            if use_tree:
                for v in range(n):
                    if alive[v]:
                        wv = _weight(kind, deg[v])
                        w[v] = wv
                        _fw_add(&tree, v, wv)
                        wsum_int += deg[v]

            for rr in range(n_remove):
                if kind == GENERAL or (kind == CENTRAL and wsum_int == 0):
                    v = live[_below(&r, nlive)]
                else:
                    while True:
                        total = _fw_total(&tree)
                        v = _fw_find(&tree, _random(&r) * total)
                        if v < n and alive[v] and w[v] > 0.0:
                            break
                removed[rr] = v
                alive[v] = 0
                last = live[nlive - 1]
                live[where[v]] = last
                where[last] = where[v]
                where[v] = -1
                nlive -= 1
                if use_tree:
                    _fw_add(&tree, v, -w[v])
                    if kind == CENTRAL:
                        wsum_int -= <int64_t>w[v]
                    w[v] = 0.0
                for t in range(indptr[v], indptr[v + 1]):
                    u = indices[t]
                    if not alive[u]:
                        continue
                    deg[u] -= 1
                    if use_tree and recompute:
                        wu = _weight(kind, deg[u])
                        _fw_add(&tree, u, wu - w[u])
                        if kind == CENTRAL:
                            wsum_int -= 1
                        w[u] = wu
                deg[v] = 0
    finally:
        free(alive)
        free(deg)
        free(live)
        free(where)
        free(w)
        free(tree.tree)
    _store(rng, &r)
    return removed_arr


def component_labels(cnp.int64_t[::1] indptr, cnp.int64_t[::1] indices,
                     cnp.uint8_t[::1] alive):
    cdef int64_t n = indptr.shape[0] - 1
    cdef cnp.ndarray[cnp.int64_t, ndim=1] labels_arr = np.full(n, -1, dtype=np.int64)
    cdef int64_t* labels = <int64_t*>labels_arr.data
    cdef int64_t* stack = <int64_t*>malloc(max(n, 1) * sizeof(int64_t))
    cdef int64_t* sizes = <int64_t*>malloc(max(n, 1) * sizeof(int64_t))
    cdef int64_t s, v, u, t, top, size, ncomp = 0
    if stack == NULL or sizes == NULL:
        free(stack)
        free(sizes)
        raise MemoryError()
    try:
        with nogil:
            for s in range(n):
                if not alive[s] or labels[s] >= 0:
                    continue
                labels[s] = ncomp
                stack[0] = s
                top = 1
                size = 0
                while top > 0:
                    top -= 1
                    v = stack[top]
                    size += 1
                    for t in range(indptr[v], indptr[v + 1]):
                        u = indices[t]
                        if alive[u] and labels[u] < 0:
                            labels[u] = ncomp
                            stack[top] = u
                            top += 1
                sizes[ncomp] = size
                ncomp += 1
        sizes_arr = np.asarray(<int64_t[:max(ncomp, 1)]>sizes, dtype=np.int64)[:ncomp].copy()
    finally:
        free(stack)
        free(sizes)
    return labels_arr, sizes_arr


def local_clustering_all(cnp.int64_t[::1] indptr, cnp.int64_t[::1] indices,
                         cnp.uint8_t[::1] alive):
    cdef int64_t n = indptr.shape[0] - 1
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out_arr = np.zeros(n, dtype=np.float64)
    cdef double* out = <double*>out_arr.data
    cdef int64_t* mark = <int64_t*>malloc(max(n, 1) * sizeof(int64_t))
    cdef int64_t v, u, t, s, k, links
    if mark == NULL:
        raise MemoryError()
    try:
        with nogil:
            for v in range(n):
                mark[v] = -1
            for v in range(n):
                if not alive[v]:
                    continue
                k = 0
                for t in range(indptr[v], indptr[v + 1]):
                    u = indices[t]
                    if alive[u]:
                        mark[u] = v
                        k += 1
                if k < 2:
                    continue
                links = 0
                for t in range(indptr[v], indptr[v + 1]):
                    u = indices[t]
                    if not alive[u]:
                        continue
                    for s in range(indptr[u], indptr[u + 1]):
                        if mark[indices[s]] == v:
                            links += 1
                out[v] = (links / 2.0) / (k * (k - 1) / 2.0)
    finally:
        free(mark)
    return out_arr
