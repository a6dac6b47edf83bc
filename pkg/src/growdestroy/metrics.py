"""Topology measurements on a realized network.

All measurements take either a :class:`~growdestroy.graph.Graph` or a
:class:`CsrView` (CSR arrays plus a live mask). The array form lets the
sweep pipeline skip building Python adjacency sets.

Clustering convention: nodes with fewer than two neighbors contribute a
local clustering of 0 and are included in the average. On attacked graphs
with many isolated nodes this gives a noticeably lower ``<C>`` than
averaging over ``k >= 2`` nodes only.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np
from scipy import stats

from . import _kernels
from .errors import DomainError
from .graph import Graph


class CsrView(NamedTuple):
    """Read-only array view of a graph.

    ``indices[indptr[v]:indptr[v+1]]`` lists neighbors of ``v``; entries for
    dead nodes are tolerated and ignored by every measurement.
    """

    indptr: np.ndarray
    indices: np.ndarray
    alive: np.ndarray

    @classmethod
    def from_graph(cls, g: Graph) -> "CsrView":
        return cls(*g.to_csr())

    @classmethod
    def from_edges(cls, n: int, edges: np.ndarray, alive=None) -> "CsrView":
        edges = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
        src = np.concatenate([edges[:, 0], edges[:, 1]])
        dst = np.concatenate([edges[:, 1], edges[:, 0]])
        order = np.lexsort((dst, src))
        indptr = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(np.bincount(src, minlength=n), out=indptr[1:])
        if alive is None:
            alive = np.ones(n, dtype=np.uint8)
        return cls(indptr, np.ascontiguousarray(dst[order]), np.asarray(alive, dtype=np.uint8))

    @property
    def n_live(self) -> int:
        return int(np.count_nonzero(self.alive))

    def degrees(self) -> np.ndarray:
        """Degree of every id counted over live neighbors (0 for dead ids)."""
        row = np.repeat(np.arange(len(self.indptr) - 1), np.diff(self.indptr))
        keep = self.alive[self.indices].astype(bool) & self.alive[row].astype(bool)
        return np.bincount(row[keep], minlength=len(self.alive)).astype(np.int64)

    def live_degrees(self) -> np.ndarray:
        return self.degrees()[self.alive.astype(bool)]


def _view(g) -> CsrView:
    view = g if isinstance(g, CsrView) else CsrView.from_graph(g)
    if view.n_live == 0:
        raise DomainError("measurement needs a nonempty graph")
    return view


@dataclass(frozen=True)
class DegreeHistogram:
    """Number of nodes per degree value."""

    counts: dict[int, int]
    n: int

    def __post_init__(self):
        if sum(self.counts.values()) != self.n:
            raise DomainError("histogram counts must sum to the node count")

    @classmethod
    def from_degrees(cls, degrees) -> "DegreeHistogram":
        degrees = np.asarray(degrees, dtype=np.int64)
        bc = np.bincount(degrees) if degrees.size else np.zeros(0, dtype=np.int64)
        counts = {int(k): int(c) for k, c in enumerate(bc) if c}
        return cls(counts, int(degrees.size))

    def ks(self) -> list[int]:
        return sorted(self.counts)

    def pk(self) -> dict[int, float]:
        return {k: self.counts[k] / self.n for k in self.ks()}

    def mean(self) -> float:
        return sum(k * c for k, c in self.counts.items()) / self.n

    def k_max_with_count(self, min_count: int) -> int | None:
        ks = [k for k, c in self.counts.items() if c >= min_count]
        return max(ks) if ks else None

    def merged(self, other: "DegreeHistogram") -> "DegreeHistogram":
        counts = dict(self.counts)
        for k, c in other.counts.items():
            counts[k] = counts.get(k, 0) + c
        return DegreeHistogram(counts, self.n + other.n)

    def log_binned(self, bins_per_decade: int = 10) -> list[tuple[float, float]]:
        """``(geometric bin center, mean P(k) per unit k)`` over positive degrees.

        For plotting only; fits use the raw histogram.
        """
        ks = [k for k in self.ks() if k > 0]
        if not ks:
            return []
        edges = np.logspace(0, math.log10(ks[-1] + 1), max(2, int(
            bins_per_decade * math.log10(ks[-1] + 1)) + 1))
        edges = np.unique(np.floor(edges).astype(np.int64))
        if edges[-1] <= ks[-1]:
            edges = np.append(edges, ks[-1] + 1)
        out = []
        for lo, hi in zip(edges[:-1], edges[1:]):
            mass = sum(self.counts.get(k, 0) for k in range(lo, hi)) / self.n
            if mass > 0:
                out.append((math.sqrt(lo * (hi - 1)) if hi - 1 > lo else float(lo),
                            mass / (hi - lo)))
        return out


@dataclass(frozen=True)
class PowerLawFit:
    exponent: float
    stderr: float
    x_min: float
    x_max: float
    r_squared: float
    valid: bool
    n_points: int = 0

    @classmethod
    def invalid(cls, x_min=math.nan, x_max=math.nan, n_points=0) -> "PowerLawFit":
        return cls(math.nan, math.nan, x_min, x_max, math.nan, False, n_points)

    @property
    def reported(self) -> float:
        """Exponent if the fit is valid, NaN otherwise."""
        return self.exponent if self.valid else math.nan


def fit_power_law(points: Sequence[tuple[float, float]], x_min: float, x_max: float) -> PowerLawFit:
    """Least-squares line through ``(log x, log y)`` for ``x`` in the window.

    Returns ``valid=False`` when fewer than three distinct ``x`` values with
    positive ``y`` fall inside ``[x_min, x_max]``.

    >>> fit = fit_power_law([(x, 7.0 * x ** -2.5) for x in range(2, 101)], 2, 100)
    >>> round(fit.exponent, 6)
    2.5
    """
    if x_min is None or x_max is None or not x_min <= x_max:
        return PowerLawFit.invalid(x_min, x_max)
    xs, ys = [], []
    for x, y in points:
        if x_min <= x <= x_max and x > 0 and y > 0:
            xs.append(float(x))
            ys.append(float(y))
    if len(set(xs)) < 3:
        return PowerLawFit.invalid(x_min, x_max, len(xs))
    res = stats.linregress(np.log(xs), np.log(ys))
    return PowerLawFit(
        exponent=-float(res.slope),
        stderr=float(res.stderr),
        x_min=float(x_min),
        x_max=float(x_max),
        r_squared=float(res.rvalue) ** 2,
        valid=True,
        n_points=len(xs),
    )


def fit_degree_exponent(h: DegreeHistogram, m: int, k_min=None, k_max=None,
                        min_count: int = 5) -> PowerLawFit:
    """Fit ``P(k) ~ k^-gamma``. Defaults: ``k_min = m``, ``k_max`` = largest
    degree seen at least ``min_count`` times."""
    k_min = m if k_min is None else k_min
    k_max = h.k_max_with_count(min_count) if k_max is None else k_max
    return fit_power_law(list(h.pk().items()), k_min, k_max)


def fit_cluster_exponent(sizes: dict[int, int], s_min: int = 2, s_max=None,
                         min_count: int = 3) -> PowerLawFit:
    """Fit ``n(S) ~ S^-tau`` on non-giant cluster counts. Default ``s_max`` is
    the largest size occurring at least ``min_count`` times."""
    if s_max is None:
        big = [s for s, c in sizes.items() if c >= min_count]
        s_max = max(big) if big else None
    return fit_power_law(sorted(sizes.items()), s_min, s_max)


def degree_distribution(g) -> DegreeHistogram:
    return DegreeHistogram.from_degrees(_view(g).live_degrees())


def average_degree(g) -> float:
    if isinstance(g, Graph):
        if g.number_of_nodes() == 0:
            raise DomainError("measurement needs a nonempty graph")
        return 2.0 * g.edge_count / g.number_of_nodes()
    view = _view(g)
    return float(view.live_degrees().sum()) / view.n_live


def _components(view: CsrView) -> tuple[np.ndarray, np.ndarray]:
    return _kernels.component_labels(view.indptr, view.indices, view.alive)


def cluster_size_distribution(g) -> tuple[int, dict[int, int]]:
    """``(giant size, {S: n(S)})`` with the giant removed from the counts.

    The giant is the largest component; ties go to the component holding the
    smallest node id.
    """
    _, sizes = _components(_view(g))
    return _split_giant(sizes)


def _split_giant(sizes: np.ndarray) -> tuple[int, dict[int, int]]:
    # components are numbered by smallest member, so argmax picks the tie-break winner
    gi = int(np.argmax(sizes))
    rest = np.delete(sizes, gi)
    counts: dict[int, int] = {}
    for s in rest.tolist():
        counts[s] = counts.get(s, 0) + 1
    return int(sizes[gi]), dict(sorted(counts.items()))


def giant_fraction(g) -> float:
    view = _view(g)
    _, sizes = _components(view)
    return int(sizes.max()) / view.n_live


def average_clustering(g) -> float:
    view = _view(g)
    local = _kernels.local_clustering_all(view.indptr, view.indices, view.alive)
    return float(local[view.alive.astype(bool)].sum()) / view.n_live


def collapse_degree_distribution(h: DegreeHistogram, m: int) -> list[tuple[int, float]]:
    """``(k, P(k) / (2 m^2))`` for every observed degree."""
    if h.n == 0:
        raise DomainError("histogram is empty")
    scale = 2.0 * m * m
    return [(k, p / scale) for k, p in h.pk().items()]


def collapse_ks_distance(a: Sequence[tuple[int, float]], b: Sequence[tuple[int, float]],
                         k_lo=None, k_hi=None) -> float:
    """Kolmogorov-Smirnov distance between two collapsed curves on a shared range.

    Each curve is restricted to ``[k_lo, k_hi]`` (default: the overlap of the
    two supports) and normalized to unit mass there, so the statistic
    compares the shapes of the curves over the range.
    """
    ka = [k for k, _ in a]
    kb = [k for k, _ in b]
    k_lo = max(min(ka), min(kb)) if k_lo is None else k_lo
    k_hi = min(max(ka), max(kb)) if k_hi is None else k_hi
    grid = sorted({k for k in ka + kb if k_lo <= k <= k_hi})
    if not grid:
        raise DomainError("curves share no degree values")

    def cdf(curve):
        d = {k: y for k, y in curve if k_lo <= k <= k_hi}
        vals = np.array([d.get(k, 0.0) for k in grid])
        total = vals.sum()
        if total <= 0:
            raise DomainError("curve has no mass on the shared range")
        return np.cumsum(vals) / total

    return float(np.max(np.abs(cdf(a) - cdf(b))))


REPORT_HEADER = ("n0", "m", "p", "attack", "eta", "n", "gamma", "gamma_err", "avg_k",
                 "tau", "tau_err", "avg_c", "giant_frac", "cluster_count")


@dataclass(frozen=True)
class MetricsReport:
    n0: int
    m: int
    p: float
    attack: str
    eta: float
    n: int
    edge_count: int
    gamma: PowerLawFit
    avg_degree: float
    tau: PowerLawFit
    avg_clustering: float
    giant_fraction: float
    giant_size: int
    cluster_count: int
    cluster_sizes: dict[int, int] = field(default_factory=dict)
    histogram: DegreeHistogram | None = field(default=None, compare=False, repr=False)

    def row(self) -> dict[str, object]:
        return {
            "n0": self.n0, "m": self.m, "p": self.p, "attack": self.attack,
            "eta": self.eta, "n": self.n,
            "gamma": self.gamma.reported, "gamma_err": self.gamma.stderr if self.gamma.valid else math.nan,
            "avg_k": self.avg_degree,
            "tau": self.tau.reported, "tau_err": self.tau.stderr if self.tau.valid else math.nan,
            "avg_c": self.avg_clustering, "giant_frac": self.giant_fraction,
            "cluster_count": self.cluster_count,
        }


def compute_metrics(g, *, n0: int, m: int, p: float, attack: str = "none",
                    eta: float = 0.0) -> MetricsReport:
    """Every measured quantity of one realized network."""
    view = _view(g)
    deg = view.live_degrees()
    n = int(deg.size)
    hist = DegreeHistogram.from_degrees(deg)
    _, sizes = _components(view)
    giant, rest = _split_giant(sizes)
    local = _kernels.local_clustering_all(view.indptr, view.indices, view.alive)
    return MetricsReport(
        n0=int(n0), m=int(m), p=float(p), attack=attack, eta=float(eta), n=n,
        edge_count=int(deg.sum()) // 2,
        gamma=fit_degree_exponent(hist, m),
        avg_degree=float(deg.sum()) / n,
        tau=fit_cluster_exponent(rest),
        avg_clustering=float(local[view.alive.astype(bool)].sum()) / n,
        giant_fraction=giant / n,
        giant_size=giant,
        cluster_count=int(sizes.size),
        cluster_sizes=rest,
        histogram=hist,
    )


# -- CSV export -----------------------------------------------------------

def format_value(v) -> str:
    """CSV cell text: floats as ``repr`` (round-trippable), NaN as empty."""
    if isinstance(v, float):
        return "" if math.isnan(v) else repr(v)
    return str(v)


def write_histogram_csv(h: DegreeHistogram, path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["k", "count", "pk"])
        for k in h.ks():
            w.writerow([k, h.counts[k], format_value(h.counts[k] / h.n)])


def write_cluster_csv(sizes: dict[int, int], path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["S", "count"])
        for s in sorted(sizes):
            w.writerow([s, sizes[s]])


def write_report_csv(report: MetricsReport, path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(REPORT_HEADER)
        row = report.row()
        w.writerow([format_value(row[c]) for c in REPORT_HEADER])
