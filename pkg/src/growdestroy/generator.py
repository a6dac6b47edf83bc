"""Growth phase: seed ring plus mixed popularity/fitness attachment.

Every new node draws its fitness uniformly from [0, 1). It then picks an
attachment mode: with probability ``p`` it links preferentially by degree
(weight ``k_i``), otherwise by fitness times degree (weight ``f_i * k_i``),
where ``f_i`` is the fitness of the candidate target. All ``m`` links of a
node use the same mode unless ``per_link`` is set.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import ParameterError
from .graph import Graph
from .rng import RngStream

BA = "ba"
FITNESS = "fitness"


@dataclass(frozen=True)
class GenerationParams:
    """Growth parameters.

    Parameters
    ----------
    n0 : int
        Number of nodes after growth.
    m : int
        Links added with every new node. The seed ring has ``m + 2`` nodes.
    p : float
        Probability that a new node attaches by degree alone.
    per_link : bool
        Draw the attachment mode for every link instead of once per node.
    """

    n0: int
    m: int
    p: float = 0.5
    per_link: bool = False

    def __post_init__(self):
        if isinstance(self.m, bool) or int(self.m) != self.m or self.m < 1:
            raise ParameterError(f"m must be an integer >= 1, got {self.m!r}")
        if isinstance(self.n0, bool) or int(self.n0) != self.n0:
            raise ParameterError(f"n0 must be an integer, got {self.n0!r}")
        if self.n0 < self.m0:
            raise ParameterError(f"n0 must be >= m0 = m + 2 = {self.m0}, got n0={self.n0}")
        if not 0.0 <= float(self.p) <= 1.0:
            raise ParameterError(f"p must lie in [0, 1], got {self.p!r}")

    @property
    def m0(self) -> int:
        return int(self.m) + 2

    @property
    def expected_edges(self) -> int:
        return self.m0 + (int(self.n0) - self.m0) * int(self.m)


def build_seed_ring(m0: int, rng: RngStream) -> Graph:
    """Cycle on ``m0`` nodes with uniform fitness values."""
    if m0 < 3:
        raise ParameterError(f"seed ring needs m0 >= 3, got {m0}")
    g = Graph()
    for _ in range(m0):
        g.add_node(rng.random())
    for i in range(m0):
        g.add_edge(i, (i + 1) % m0)
    return g


def draw_mode(p: float, rng: RngStream) -> str:
    return BA if rng.random() < p else FITNESS


def mode_weights(g: Graph, mode: str) -> np.ndarray:
    """Unnormalized attachment weights over the id range of ``g``.

    Falls back to degree weights when every fitness weight is zero.
    """
    n = g.id_bound
    w = np.zeros(n, dtype=np.float64)
    for v in g.nodes():
        w[v] = g.degree(v)
    if mode == FITNESS:
        fw = np.zeros(n, dtype=np.float64)
        for v in g.nodes():
            fw[v] = g._fitness[v] * w[v]
        if fw.sum() > 0.0:
            return fw
    elif mode != BA:
        raise ParameterError(f"unknown attachment mode {mode!r}")
    return w


def attachment_weights(g: Graph, p: float, rng: RngStream) -> np.ndarray:
    """Normalized attachment probabilities for the next new node.

    Consumes one draw for the mode.
    """
    if g.edge_count == 0:
        raise ParameterError("attachment needs a graph with at least one edge")
    w = mode_weights(g, draw_mode(p, rng))
    return w / w.sum()


def _draw(cum: np.ndarray, rng: RngStream) -> int:
    # smallest index whose cumulative weight exceeds u * total
    return int(np.searchsorted(cum, rng.random() * cum[-1], side="right"))


def sample_targets(weights, m: int, rng: RngStream, live=None) -> list[int]:
    """``m`` distinct indices drawn without replacement.

    Duplicates are redrawn, which is distributionally the same as removing
    each pick and renormalizing. When fewer than ``m`` indices carry positive
    weight, the rest are drawn uniformly from ``live`` (default: every index).
    """
    w = np.asarray(weights, dtype=np.float64)
    live = list(range(len(w))) if live is None else [int(v) for v in live]
    if len(live) < m:
        raise ParameterError(f"cannot pick {m} distinct targets from {len(live)} nodes")
    positive = {int(i) for i in np.flatnonzero(w > 0.0)}
    cum = np.cumsum(w) if positive else None
    chosen: list[int] = []
    while len(chosen) < m:
        if positive.difference(chosen):
            i = _draw(cum, rng)
            if i >= len(w) or w[i] <= 0.0:
                continue
        else:
            i = live[rng.below(len(live))]
        if i not in chosen:
            chosen.append(i)
    return chosen


def grow(params: GenerationParams, rng: RngStream) -> Graph:
    """Grow a network of ``params.n0`` nodes.

    The returned graph is connected and has exactly
    ``m0 + (n0 - m0) * m`` edges.
    """
    fitness, edges = grow_arrays(params, rng)
    return Graph.from_edges(fitness, edges)


def grow_arrays(params: GenerationParams, rng: RngStream) -> tuple[np.ndarray, np.ndarray]:
    """Kernel output of :func:`grow`: fitness per node and edges in creation order."""
    return _kernels.grow_edges(int(params.n0), int(params.m), float(params.p),
                               bool(params.per_link), rng)


def grow_reference(params: GenerationParams, rng: RngStream) -> Graph:
    """Slow growth built from :func:`attachment_weights` and :func:`sample_targets`.

    Consumes the random stream in the same order as the kernels, so for the
    same seed it reproduces :func:`grow` up to floating point ties.
    """
    m = int(params.m)
    g = build_seed_ring(params.m0, rng)
    for _ in range(params.m0, int(params.n0)):
        fj = rng.random()
        live = g.nodes()
        if params.per_link:
            chosen: list[int] = []
            while len(chosen) < m:
                # fresh mode per attempt; a repeated target is redrawn
                i = sample_targets(attachment_weights(g, params.p, rng), 1, rng, live=live)[0]
                if i not in chosen:
                    chosen.append(i)
        else:
            chosen = sample_targets(attachment_weights(g, params.p, rng), m, rng, live=live)
        j = g.add_node(fj)
        for i in chosen:
            g.add_edge(i, j)
    return g
