"""Undirected simple graph with per-node fitness.

Nodes are dense integer ids handed out in creation order and never reused,
so an edge list written after an attack still refers to the same nodes as
one written before it. Adjacency is a list of per-node neighbor sets: degree
lookup is O(1) and removing a node costs O(k).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Iterator

import numpy as np

from . import _kernels
from .errors import DomainError, PreconditionError


class Graph:
    """Mutable undirected simple graph.

    Examples
    --------
    >>> g = Graph()
    >>> a, b = g.add_node(0.2), g.add_node(0.9)
    >>> g.add_edge(a, b)
    >>> g.degree(a), g.edge_count
    (1, 1)
    """

    def __init__(self):
        self._adj: list[set[int] | None] = []
        self._fitness: list[float] = []
        self._n_live = 0
        self._edge_count = 0

    # -- construction -----------------------------------------------------

    @classmethod
    def from_edges(cls, fitness, edges) -> "Graph":
        """Graph on ``len(fitness)`` nodes with the given ``(E, 2)`` edges.

        Edges are validated exactly as :meth:`add_edge` would.
        """
        g = cls()
        for f in np.asarray(fitness, dtype=np.float64).tolist():
            g.add_node(f)
        adj = g._adj
        n = len(adj)
        count = 0
        for u, v in np.asarray(edges, dtype=np.int64).reshape(-1, 2).tolist():
            if u == v:
                raise PreconditionError(f"self-loop on node {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise PreconditionError(f"edge ({u}, {v}) references a missing node")
            au = adj[u]
            if v in au:
                raise PreconditionError(f"duplicate edge ({u}, {v})")
            au.add(v)
            adj[v].add(u)
            count += 1
        g._edge_count = count
        return g

    def copy(self) -> "Graph":
        g = Graph()
        g._adj = [None if s is None else set(s) for s in self._adj]
        g._fitness = list(self._fitness)
        g._n_live = self._n_live
        g._edge_count = self._edge_count
        return g

    # -- mutation ---------------------------------------------------------

    def add_node(self, fitness: float) -> int:
        """Add an isolated node and return its id."""
        f = float(fitness)
        if math.isnan(f) or not 0.0 <= f <= 1.0:
            raise DomainError(f"fitness must lie in [0, 1], got {fitness!r}")
        self._adj.append(set())
        self._fitness.append(f)
        self._n_live += 1
        return len(self._adj) - 1

    def add_edge(self, u: int, v: int) -> None:
        if u == v:
            raise PreconditionError(f"self-loop on node {u}")
        au = self._live_adj(u)
        av = self._live_adj(v)
        if v in au:
            raise PreconditionError(f"duplicate edge ({u}, {v})")
        au.add(v)
        av.add(u)
        self._edge_count += 1

    def remove_node(self, v: int) -> None:
        """Remove ``v`` together with its incident edges."""
        av = self._live_adj(v)
        adj = self._adj
        for u in av:
            adj[u].discard(v)
        self._edge_count -= len(av)
        adj[v] = None
        self._n_live -= 1

    def remove_nodes_from(self, nodes: Iterable[int]) -> None:
        for v in nodes:
            self.remove_node(int(v))

    # -- queries ----------------------------------------------------------

    def _live_adj(self, v) -> set[int]:
        try:
            s = self._adj[v] if v >= 0 else None
        except (IndexError, TypeError):
            s = None
        if s is None:
            raise PreconditionError(f"node {v!r} is not a live node")
        return s

    def has_node(self, v: int) -> bool:
        return 0 <= v < len(self._adj) and self._adj[v] is not None

    def has_edge(self, u: int, v: int) -> bool:
        return self.has_node(u) and v in self._adj[u]

    def degree(self, v: int) -> int:
        return len(self._live_adj(v))

    def neighbors(self, v: int) -> frozenset[int]:
        return frozenset(self._live_adj(v))

    def fitness(self, v: int) -> float:
        self._live_adj(v)
        return self._fitness[v]

    @property
    def edge_count(self) -> int:
        return self._edge_count

    @property
    def id_bound(self) -> int:
        """One past the largest id ever issued."""
        return len(self._adj)

    def number_of_nodes(self) -> int:
        return self._n_live

    def number_of_edges(self) -> int:
        return self._edge_count

    def __len__(self) -> int:
        return self._n_live

    def __contains__(self, v) -> bool:
        return isinstance(v, (int, np.integer)) and self.has_node(int(v))

    def nodes(self) -> list[int]:
        """Live node ids in ascending order."""
        return [v for v, s in enumerate(self._adj) if s is not None]

    def edges(self) -> Iterator[tuple[int, int]]:
        """Each edge once as ``(u, v)`` with ``u < v``, lexicographic order."""
        for u, s in enumerate(self._adj):
            if s is None:
                continue
            for v in sorted(s):
                if v > u:
                    yield (u, v)

    def degrees(self) -> np.ndarray:
        """Degrees of live nodes, ascending id order."""
        return np.fromiter((len(s) for s in self._adj if s is not None),
                           dtype=np.int64, count=self._n_live)

    def fitness_values(self) -> np.ndarray:
        """Fitness of live nodes, ascending id order."""
        return np.fromiter((f for f, s in zip(self._fitness, self._adj) if s is not None),
                           dtype=np.float64, count=self._n_live)

    def edge_array(self) -> np.ndarray:
        """``(E, 2)`` array of :meth:`edges`."""
        out = np.fromiter((x for e in self.edges() for x in e), dtype=np.int64,
                          count=2 * self._edge_count)
        return out.reshape(-1, 2)

    def to_csr(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """``(indptr, indices, alive)`` over the full id range.

        Dead ids have empty rows and ``alive == 0``; neighbor lists are sorted.
        """
        adj = self._adj
        n = len(adj)
        counts = np.fromiter((0 if s is None else len(s) for s in adj),
                             dtype=np.int64, count=n)
        indptr = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(counts, out=indptr[1:])
        indices = np.fromiter((u for s in adj if s for u in sorted(s)),
                              dtype=np.int64, count=int(indptr[-1]))
        alive = np.fromiter((s is not None for s in adj), dtype=np.uint8, count=n)
        return indptr, indices, alive

    def __repr__(self) -> str:
        return f"Graph(nodes={self._n_live}, edges={self._edge_count})"


def new_graph() -> Graph:
    return Graph()


@dataclass(frozen=True)
class ComponentLabeling:
    """Connected components of a graph.

    ``labels`` maps each live node id to its component id; components are
    numbered in order of their smallest node id, so component 0 contains the
    smallest live id.
    """

    labels: dict[int, int]
    sizes: tuple[int, ...]

    def component_of(self, v: int) -> int:
        return self.labels[v]

    def __len__(self) -> int:
        return len(self.sizes)


def component_arrays(g: Graph, csr=None) -> tuple[np.ndarray, np.ndarray]:
    """Raw ``(labels, sizes)`` arrays over the id range (dead ids get -1)."""
    indptr, indices, alive = g.to_csr() if csr is None else csr
    return _kernels.component_labels(indptr, indices, alive)


def connected_components(g: Graph) -> ComponentLabeling:
    labels, sizes = component_arrays(g)
    live = [v for v in range(len(labels)) if labels[v] >= 0]
    return ComponentLabeling(
        labels={v: int(labels[v]) for v in live},
        sizes=tuple(int(s) for s in sizes),
    )


def local_clustering(g: Graph, v: int) -> float:
    """Fraction of neighbor pairs of ``v`` that are themselves linked.

    Nodes with fewer than two neighbors get 0.
    """
    nbrs = g._live_adj(v)
    k = len(nbrs)
    if k < 2:
        return 0.0
    adj = g._adj
    links = sum(len(nbrs & adj[u]) for u in nbrs) // 2
    return links / (k * (k - 1) / 2)


def clustering_array(g: Graph, csr=None) -> np.ndarray:
    """Local clustering of every id (0 for dead ids) via the kernel backend."""
    indptr, indices, alive = g.to_csr() if csr is None else csr
    return _kernels.local_clustering_all(indptr, indices, alive)


# -- text formats ---------------------------------------------------------

def write_edge_list(g: Graph, path) -> None:
    """One ``u v`` line per edge, ``u < v``, sorted."""
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.writelines(f"{u} {v}\n" for u, v in g.edges())


def write_node_table(g: Graph, path) -> None:
    """One ``id fitness`` line per live node; fitness printed with 17 significant digits."""
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        for v in g.nodes():
            fh.write(f"{v} {g._fitness[v]:.17g}\n")


def read_graph(edge_path, node_path) -> Graph:
    """Inverse of :func:`write_edge_list` / :func:`write_node_table`.

    Ids missing from the node table (removed by an attack) are recreated and
    removed again before edges are read, so ids stay stable.
    """
    fitness: dict[int, float] = {}
    with open(node_path, encoding="ascii") as fh:
        for line in fh:
            parts = line.split()
            if parts:
                fitness[int(parts[0])] = float(parts[1])
    g = Graph()
    top = max(fitness) + 1 if fitness else 0
    for v in range(top):
        g.add_node(fitness.get(v, 0.0))
    for v in range(top):
        if v not in fitness:
            g.remove_node(v)
    with open(edge_path, encoding="ascii") as fh:
        for line in fh:
            parts = line.split()
            if parts:
                g.add_edge(int(parts[0]), int(parts[1]))
    return g
