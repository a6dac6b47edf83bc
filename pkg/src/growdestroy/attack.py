"""Destroy phase: remove ``round(eta * N0)`` nodes from a grown network.

Removal probabilities by kind:

* ``central``     proportional to the degree ``k``
* ``peripheral``  proportional to ``1 / (k + 1)``
* ``general``     uniform

Nodes are removed one at a time and, by default, every weight is recomputed
from the current degrees after each removal. ``recompute=False`` freezes the
weights at their pre-attack values instead.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import ParameterError
from .graph import Graph
from .rng import RngStream

KINDS = ("central", "peripheral", "general", "none")

_KIND_CODE = {
    "central": _kernels.CENTRAL,
    "peripheral": _kernels.PERIPHERAL,
    "general": _kernels.GENERAL,
}


def round_half_up(x: float) -> int:
    return int(math.floor(x + 0.5))


@dataclass(frozen=True)
class AttackSpec:
    kind: str = "none"
    eta: float = 0.0
    recompute: bool = True

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ParameterError(f"attack must be one of {'|'.join(KINDS)}, got {self.kind!r}")
        if not 0.0 <= float(self.eta) < 1.0:
            raise ParameterError(f"eta must lie in [0, 1), got {self.eta!r}")

    def n_remove(self, n0: int) -> int:
        """Number of nodes removed from an ``n0``-node network."""
        if self.kind == "none":
            return 0
        return round_half_up(float(self.eta) * n0)

    def realized_eta(self, n0: int) -> float:
        return self.n_remove(n0) / n0 if n0 else 0.0


def removal_weights(g: Graph, kind: str) -> np.ndarray:
    """Normalized removal probabilities over the id range of ``g``.

    A central attack on a graph without edges falls back to uniform weights.
    """
    if g.number_of_nodes() == 0:
        raise ParameterError("removal weights need at least one live node")
    w = np.zeros(g.id_bound, dtype=np.float64)
    nodes = g.nodes()
    deg = np.array([g.degree(v) for v in nodes], dtype=np.float64)
    if kind == "central":
        vals = deg if deg.sum() > 0 else np.ones_like(deg)
    elif kind == "peripheral":
        vals = 1.0 / (deg + 1.0)
    elif kind == "general":
        vals = np.ones_like(deg)
    else:
        raise ParameterError(f"no removal weights for attack kind {kind!r}")
    w[nodes] = vals
    return w / w.sum()


def attack_sequence(g: Graph, spec: AttackSpec, rng: RngStream, csr=None) -> np.ndarray:
    """Ids removed by ``spec``, in removal order. ``g`` is not modified."""
    n_live = g.number_of_nodes()
    n_a = spec.n_remove(n_live)
    if n_a == 0:
        return np.zeros(0, dtype=np.int64)
    if n_a >= n_live:
        raise ParameterError(f"attack would remove {n_a} of {n_live} nodes; need N_a < N0")
    indptr, indices, alive = g.to_csr() if csr is None else csr
    return _kernels.attack_order(indptr, indices, alive, _KIND_CODE[spec.kind],
                                 n_a, bool(spec.recompute), rng)


def apply_attack(g: Graph, spec: AttackSpec, rng: RngStream, *, inplace: bool = False,
                 csr=None) -> Graph:
    """Attacked copy of ``g`` (or ``g`` itself with ``inplace=True``)."""
    removed = attack_sequence(g, spec, rng, csr=csr)
    out = g if inplace else g.copy()
    out.remove_nodes_from(removed.tolist())
    return out
