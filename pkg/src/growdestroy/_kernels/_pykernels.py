"""Pure-Python kernels.

Reference implementation of the hot loops. ``_ckernels.pyx`` mirrors every
function here statement for statement, including the order of random draws
and floating point accumulation, so both backends return identical arrays
for the same ``RngStream`` state.
"""

from __future__ import annotations

import numpy as np

GENERAL = 0
CENTRAL = 1
PERIPHERAL = 2


class _Fenwick:
    """Binary indexed tree over nonnegative doubles."""

    __slots__ = ("n", "tree", "top")

    def __init__(self, n):
        self.n = n
        self.tree = [0.0] * (n + 1)
        top = 1
        while top * 2 <= n:
            top *= 2
        self.top = top

    def add(self, i, delta):
        tree = self.tree
        n = self.n
        i += 1
        while i <= n:
            tree[i] += delta
            i += i & -i

    def total(self):
        tree = self.tree
        s = 0.0
        i = self.n
        while i > 0:
            s += tree[i]
            i -= i & -i
        return s

    def find(self, target):
        # smallest 0-based index whose inclusive prefix sum exceeds target;
        # returns n when rounding pushes target past the total
        tree = self.tree
        n = self.n
        pos = 0
        step = self.top
        while step:
            nxt = pos + step
            if nxt <= n and tree[nxt] <= target:
                pos = nxt
                target -= tree[nxt]
            step >>= 1
        return pos


def weighted_draws(weights, n_draws, rng):
    """``n_draws`` independent indices, each with probability proportional to
    ``weights``, using the same tree lookup as growth and attack."""
    w = [float(x) for x in weights]
    n = len(w)
    tree = _Fenwick(n)
    for i in range(n):
        tree.add(i, w[i])
    total = tree.total()
    if not total > 0.0:
        raise ValueError("weights must have a positive sum")
    out = [0] * n_draws
    for r in range(n_draws):
        while True:
            i = tree.find(rng.random() * total)
            if i < n and w[i] > 0.0:
                break
        out[r] = i
    return np.asarray(out, dtype=np.int64)


def grow_edges(n0, m, p, per_link, rng):
    """Seed ring plus mixed preferential growth.

    Returns ``(fitness, edges)`` where ``edges`` has shape ``(E, 2)`` and
    lists edges in creation order. Draw order: seed fitnesses, then for each
    new node its fitness, its mode (per node) and its targets.
    """
    m0 = m + 2
    fitness = [0.0] * n0
    deg = [0] * n0
    ba = _Fenwick(n0)
    fit = _Fenwick(n0)
    n_edges = m0 + (n0 - m0) * m
    edges = [0] * (2 * n_edges)
    npos_f = 0

    for i in range(m0):
        f = rng.random()
        fitness[i] = f
        if f > 0.0:
            npos_f += 1
    e = 0
    for i in range(m0):
        j = i + 1 if i + 1 < m0 else 0
        edges[e] = i if i < j else j
        edges[e + 1] = j if i < j else i
        e += 2
        deg[i] = 2
        ba.add(i, 2.0)
        fit.add(i, 2.0 * fitness[i])

    chosen = [0] * m
    for j in range(m0, n0):
        fj = rng.random()
        fitness[j] = fj
        mode_ba = True
        if not per_link:
            mode_ba = rng.random() < p
        nch = 0
        while nch < m:
            if per_link:
                mode_ba = rng.random() < p
            if not mode_ba and npos_f == 0:
                mode_ba = True
            if not mode_ba:
                free_pos = npos_f
                for c in range(nch):
                    if fitness[chosen[c]] > 0.0:
                        free_pos -= 1
                if free_pos == 0:
                    # fewer than m positive-weight candidates: uniform pad
                    i = rng.below(j)
                    dup = False
                    for c in range(nch):
                        if chosen[c] == i:
                            dup = True
                    if not dup:
                        chosen[nch] = i
                        nch += 1
                    continue
                tree = fit
            else:
                tree = ba
            total = tree.total()
            i = tree.find(rng.random() * total)
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
            deg[i] += 1
            ba.add(i, 1.0)
            fit.add(i, fitness[i])
        deg[j] = m
        ba.add(j, float(m))
        fit.add(j, m * fj)
        if fj > 0.0:
            npos_f += 1

    return (np.asarray(fitness, dtype=np.float64),
            np.asarray(edges, dtype=np.int64).reshape(-1, 2))


def _weight(kind, k):
    if kind == CENTRAL:
        return float(k)
    if kind == PERIPHERAL:
        return 1.0 / (k + 1.0)
    return 1.0


def attack_order(indptr, indices, alive, kind, n_remove, recompute, rng):
    """Sequence of ``n_remove`` node ids removed by the given attack.

    ``alive`` is a uint8 mask and is not modified. Neighbor lists may still
    contain dead nodes; degrees are counted over live neighbors only.
    """
    indptr = indptr.tolist()
    indices = indices.tolist()
    n = len(indptr) - 1
    alive = [bool(a) for a in alive]
    deg = [0] * n
    for v in range(n):
        if alive[v]:
            k = 0
            for t in range(indptr[v], indptr[v + 1]):
                if alive[indices[t]]:
                    k += 1
            deg[v] = k

    live = [v for v in range(n) if alive[v]]
    where = [-1] * n
    for idx, v in enumerate(live):
        where[v] = idx
    nlive = len(live)

    tree = None
    w = None
    wsum_int = 0
    if kind != GENERAL:
        tree = _Fenwick(n)
        w = [0.0] * n
        for v in live:
            wv = _weight(kind, deg[v])
            w[v] = wv
            tree.add(v, wv)
            wsum_int += deg[v]

    removed = [0] * n_remove
    for r in range(n_remove):
        if kind == GENERAL or (kind == CENTRAL and wsum_int == 0):
            v = live[rng.below(nlive)]
        else:
            while True:
                total = tree.total()
                v = tree.find(rng.random() * total)
                if v < n and alive[v] and w[v] > 0.0:
                    break
        removed[r] = v
        alive[v] = False
        last = live[nlive - 1]
        live[where[v]] = last
        where[last] = where[v]
        where[v] = -1
        nlive -= 1
        if tree is not None:
            tree.add(v, -w[v])
            if kind == CENTRAL:
                wsum_int -= int(w[v])
            w[v] = 0.0
        for t in range(indptr[v], indptr[v + 1]):
            u = indices[t]
            if not alive[u]:
                continue
            deg[u] -= 1
            if tree is not None and recompute:
                wu = _weight(kind, deg[u])
                tree.add(u, wu - w[u])
                if kind == CENTRAL:
                    wsum_int -= 1
                w[u] = wu
        deg[v] = 0
    return np.asarray(removed, dtype=np.int64)


def component_labels(indptr, indices, alive):
    """Label components in order of their smallest node id.

    Returns ``(labels, sizes)``; dead nodes get label -1.
    """
    indptr = indptr.tolist()
    indices = indices.tolist()
    alive = [bool(a) for a in alive]
    n = len(indptr) - 1
    labels = [-1] * n
    sizes = []
    stack = []
    for s in range(n):
        if not alive[s] or labels[s] >= 0:
            continue
        c = len(sizes)
        labels[s] = c
        stack.append(s)
        size = 0
        while stack:
            v = stack.pop()
            size += 1
            for t in range(indptr[v], indptr[v + 1]):
                u = indices[t]
                if alive[u] and labels[u] < 0:
                    labels[u] = c
                    stack.append(u)
        sizes.append(size)
    return np.asarray(labels, dtype=np.int64), np.asarray(sizes, dtype=np.int64)


def local_clustering_all(indptr, indices, alive):
    """Local clustering coefficient of every node (0 for dead nodes and k < 2).

    Neighbor lists may still contain dead nodes; they are ignored.
    """
    indptr = indptr.tolist()
    indices = indices.tolist()
    alive = [bool(a) for a in alive]
    n = len(indptr) - 1
    out = [0.0] * n
    nbr_sets = [None] * n
    for v in range(n):
        if alive[v]:
            nbr_sets[v] = {u for u in indices[indptr[v]:indptr[v + 1]] if alive[u]}
    for v in range(n):
        if not alive[v]:
            continue
        nv = nbr_sets[v]
        k = len(nv)
        if k < 2:
            continue
        links = 0
        for u in nv:
            links += len(nv & nbr_sets[u])
        out[v] = (links / 2.0) / (k * (k - 1) / 2.0)
    return np.asarray(out, dtype=np.float64)
