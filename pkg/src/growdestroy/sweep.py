"""Experiment orchestration: single runs, grids, ensembles and reports.

Seeding
-------
Replica ``r`` of grid cell ``c`` under master seed ``s`` runs with
``derive_seed(s, c, r)`` (see :mod:`growdestroy.rng`). Single runs use cell 0.
Every output byte is a function of (config, seed, package version).
"""

from __future__ import annotations

import csv
import itertools
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np
from scipy import stats

from . import __version__, _kernels
from .attack import _KIND_CODE, AttackSpec
from .errors import ParameterError
from .generator import GenerationParams, grow_arrays
from .graph import Graph
from .metrics import (REPORT_HEADER, CsrView, MetricsReport, compute_metrics, format_value,
                      write_cluster_csv, write_histogram_csv, write_report_csv)
from .rng import RngStream, derive_seed

RESULTS_VERSION = "growdestroy-results v1"
RESULTS_HEADER = REPORT_HEADER + ("cell", "replica", "seed", "status", "error")
EXPORTS = ("edges", "nodes", "hist", "clusters", "report")

DESK_N0 = 30_000
DESK_REPLICAS = 20

OUTPUTS = ("gamma", "avg_k", "tau", "avg_c", "giant_frac")
INPUTS = ("p", "m", "eta")

# expected span of each output over the desk-scale parameter space
REFERENCE_BOUNDS = {
    "gamma": (2.4, 2.9),
    "avg_k": (0.1, 9.0),
    "tau": (2.5, 7.0),
    "avg_c": (0.0, 0.1),
    "giant_frac": (0.0, 1.0),
}


# -- single realization -----------------------------------------------------

@dataclass
class Realization:
    """Grown-and-attacked network held as arrays."""

    params: GenerationParams
    attack: AttackSpec
    fitness: np.ndarray
    edges: np.ndarray
    view: CsrView
    removed: np.ndarray

    @property
    def alive(self) -> np.ndarray:
        return self.view.alive

    def live_edges(self) -> np.ndarray:
        """Surviving edges as ``u < v`` rows in lexicographic order."""
        e = self.edges
        keep = self.alive[e[:, 0]].astype(bool) & self.alive[e[:, 1]].astype(bool)
        e = np.sort(e[keep], axis=1)
        return e[np.lexsort((e[:, 1], e[:, 0]))]

    def to_graph(self) -> Graph:
        g = Graph.from_edges(self.fitness, self.edges)
        g.remove_nodes_from(self.removed.tolist())
        return g

    def metrics(self) -> MetricsReport:
        n0 = int(self.params.n0)
        return compute_metrics(self.view, n0=n0, m=int(self.params.m), p=float(self.params.p),
                               attack=self.attack.kind, eta=self.attack.realized_eta(n0))


def realize(params: GenerationParams, attack: AttackSpec, seed: int) -> Realization:
    """Grow then attack with one random stream seeded by ``seed``."""
    rng = RngStream(seed)
    fitness, edges = grow_arrays(params, rng)
    n0 = int(params.n0)
    view = CsrView.from_edges(n0, edges)
    n_a = attack.n_remove(n0)
    if n_a >= n0:
        raise ParameterError(f"attack would remove {n_a} of {n0} nodes; need N_a < N0")
    removed = np.zeros(0, dtype=np.int64)
    if n_a:
        removed = _kernels.attack_order(view.indptr, view.indices, view.alive,
                                        _KIND_CODE[attack.kind], n_a, bool(attack.recompute), rng)
        alive = view.alive.copy()
        alive[removed] = 0
        view = CsrView(view.indptr, view.indices, alive)
    return Realization(params, attack, fitness, edges, view, removed)


# -- configuration -----------------------------------------------------------

@dataclass(frozen=True)
class RunConfig:
    params: GenerationParams
    attack: AttackSpec = AttackSpec()
    seed: int = 0
    replicas: int = 1
    out: Path | None = None
    export: frozenset = frozenset({"report"})
    cell: int = 0

    def __post_init__(self):
        if int(self.replicas) < 1:
            raise ParameterError(f"replicas must be >= 1, got {self.replicas}")
        if not 0 <= int(self.seed) < 2 ** 64:
            raise ParameterError(f"seed must be a 64-bit unsigned integer, got {self.seed}")
        unknown = set(self.export) - set(EXPORTS)
        if unknown:
            raise ParameterError(f"unknown export kind(s): {', '.join(sorted(unknown))}")
        if self.attack.n_remove(int(self.params.n0)) >= int(self.params.n0):
            raise ParameterError("eta removes every node")

    def replica_seed(self, replica: int) -> int:
        return derive_seed(int(self.seed), int(self.cell), int(replica))


def write_edge_list_array(edges: np.ndarray, path) -> None:
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write("".join(f"{u} {v}\n" for u, v in edges.tolist()))


def write_node_table_array(fitness: np.ndarray, alive: np.ndarray, path) -> None:
    ids = np.flatnonzero(alive)
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write("".join(f"{v} {f:.17g}\n" for v, f in zip(ids.tolist(), fitness[ids].tolist())))


def run_single(cfg: RunConfig, replica: int = 0) -> MetricsReport:
    """Grow, attack and measure one replica; write the requested files.

    Files go to ``cfg.out`` as ``run_c{cell}_r{replica}_{kind}.{ext}`` and the
    report row is appended to ``cfg.out/results.csv``.
    """
    seed = cfg.replica_seed(replica)
    real = realize(cfg.params, cfg.attack, seed)
    report = real.metrics()
    if cfg.out is not None:
        out = Path(cfg.out)
        out.mkdir(parents=True, exist_ok=True)
        stem = out / f"run_c{cfg.cell}_r{replica}"
        if "edges" in cfg.export:
            write_edge_list_array(real.live_edges(), f"{stem}_edges.txt")
        if "nodes" in cfg.export:
            write_node_table_array(real.fitness, real.alive, f"{stem}_nodes.txt")
        if "hist" in cfg.export:
            write_histogram_csv(report.histogram, f"{stem}_hist.csv")
        if "clusters" in cfg.export:
            write_cluster_csv(report.cluster_sizes, f"{stem}_clusters.csv")
        if "report" in cfg.export:
            write_report_csv(report, f"{stem}_report.csv")
        append_results([result_row(report, cfg.cell, replica, seed)], out / "results.csv")
    return report


def run_replicas(cfg: RunConfig) -> list[MetricsReport]:
    return [run_single(cfg, r) for r in range(int(cfg.replicas))]


# -- results table -----------------------------------------------------------

def result_row(report: MetricsReport | None, cell: int, replica: int, seed: int,
               *, cell_inputs: dict | None = None, error: str = "") -> dict:
    if report is not None:
        row = report.row()
        status = "ok"
    else:
        row = {k: math.nan for k in REPORT_HEADER}
        row.update(cell_inputs or {})
        status = "error"
    row.update(cell=cell, replica=replica, seed=seed, status=status, error=error)
    return row


def append_results(rows: Iterable[dict], path) -> None:
    path = Path(path)
    fresh = not path.exists() or path.stat().st_size == 0
    with open(path, "a", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        if fresh:
            fh.write(f"# {RESULTS_VERSION}\n")
            w.writerow(RESULTS_HEADER)
        for row in rows:
            w.writerow([format_value(row.get(c, "")) for c in RESULTS_HEADER])


def write_results(rows: Iterable[dict], path) -> None:
    path = Path(path)
    if path.exists():
        path.unlink()
    append_results(rows, path)


_INT_COLS = {"n0", "m", "n", "cluster_count", "cell", "replica", "seed"}
_STR_COLS = {"attack", "status", "error"}


def read_results(path) -> list[dict]:
    """Rows of a results CSV with numeric columns parsed (empty cells -> NaN)."""
    rows = []
    with open(path, newline="") as fh:
        lines = [ln for ln in fh if not ln.startswith("#")]
    for raw in csv.DictReader(lines):
        row = {}
        for k, v in raw.items():
            if k in _STR_COLS:
                row[k] = v
            elif v == "" or v is None:
                row[k] = math.nan
            elif k in _INT_COLS:
                row[k] = int(v) if v.lstrip("-").isdigit() else int(float(v))
            else:
                row[k] = float(v)
        rows.append(row)
    return rows


# -- sweeps ------------------------------------------------------------------

@dataclass(frozen=True)
class SweepGrid:
    """Cartesian grid of inputs; every cell runs ``replicas`` times."""

    n0: Sequence[int] = (DESK_N0,)
    m: Sequence[int] = (3,)
    p: Sequence[float] = (0.5,)
    attack: Sequence[str] = ("none",)
    eta: Sequence[float] = (0.0,)
    replicas: int = DESK_REPLICAS
    seed: int = 0
    per_link: bool = False
    recompute: bool = True

    def __post_init__(self):
        if int(self.replicas) < 1:
            raise ParameterError(f"replicas must be >= 1, got {self.replicas}")
        for name in ("n0", "m", "p", "attack", "eta"):
            if len(getattr(self, name)) == 0:
                raise ParameterError(f"grid axis {name} is empty")
        self.cells()

    def cells(self) -> list[tuple[GenerationParams, AttackSpec]]:
        out = []
        for n0, m, p, kind, eta in itertools.product(self.n0, self.m, self.p, self.attack, self.eta):
            params = GenerationParams(int(n0), int(m), float(p), self.per_link)
            spec = AttackSpec(kind, float(eta), self.recompute)
            if spec.n_remove(int(n0)) >= int(n0):
                raise ParameterError(f"eta={eta} removes every node of n0={n0}")
            out.append((params, spec))
        return out

    def __len__(self) -> int:
        return len(self.cells()) * int(self.replicas)


def _cell_inputs(params: GenerationParams, spec: AttackSpec) -> dict:
    return {"n0": int(params.n0), "m": int(params.m), "p": float(params.p),
            "attack": spec.kind, "eta": spec.realized_eta(int(params.n0))}


def _task(args):
    cell, replica, params, spec, seed = args
    try:
        report = realize(params, spec, seed).metrics()
        return result_row(report, cell, replica, seed)
    except Exception as exc:  # recorded per row; the sweep carries on
        return result_row(None, cell, replica, seed, cell_inputs=_cell_inputs(params, spec),
                          error=f"{type(exc).__name__}: {exc}")


def sweep_tasks(grids: SweepGrid | Sequence[SweepGrid]):
    grids = [grids] if isinstance(grids, SweepGrid) else list(grids)
    cell = 0
    tasks = []
    for grid in grids:
        for params, spec in grid.cells():
            for r in range(int(grid.replicas)):
                tasks.append((cell, r, params, spec, derive_seed(int(grid.seed), cell, r)))
            cell += 1
    return tasks


def run_sweep(grids: SweepGrid | Sequence[SweepGrid], workers: int = 1, out=None) -> list[dict]:
    """One result row per (cell, replica), ordered by cell then replica.

    Several grids run as one sweep with consecutive cell numbers.
    """
    tasks = sweep_tasks(grids)
    if workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_task, tasks, chunksize=max(1, len(tasks) // (4 * workers))))
    else:
        rows = [_task(t) for t in tasks]
    if out is not None:
        out = Path(out)
        out.mkdir(parents=True, exist_ok=True)
        write_results(rows, out / "results.csv")
        write_aggregate(aggregate(rows), out / "aggregate.csv")
    return rows


def failed_rows(rows: Sequence[dict]) -> list[dict]:
    return [r for r in rows if r.get("status") != "ok"]


def _nan_stats(values: Sequence[float]) -> tuple[float, float, int]:
    v = np.asarray(values, dtype=np.float64)
    v = v[~np.isnan(v)]
    if v.size == 0:
        return math.nan, math.nan, 0
    sd = float(np.std(v, ddof=1)) if v.size > 1 else math.nan
    return float(np.mean(v)), sd, int(v.size)


def aggregate(rows: Sequence[dict]) -> list[dict]:
    """Per-cell mean, standard deviation and valid count of every output."""
    cells: dict[int, list[dict]] = {}
    for row in rows:
        if row.get("status") == "ok":
            cells.setdefault(int(row["cell"]), []).append(row)
    out = []
    for cell in sorted(cells):
        group = cells[cell]
        first = group[0]
        agg = {"cell": cell, "n0": first["n0"], "m": first["m"], "p": first["p"],
               "attack": first["attack"], "eta": first["eta"], "replicas": len(group)}
        for col in ("n", "gamma", "avg_k", "tau", "avg_c", "giant_frac", "cluster_count"):
            mean, sd, n = _nan_stats([r[col] for r in group])
            agg[f"{col}_mean"] = mean
            agg[f"{col}_std"] = sd
            agg[f"{col}_valid"] = n
        out.append(agg)
    return out


def write_aggregate(agg: Sequence[dict], path) -> None:
    if not agg:
        Path(path).write_text(f"# {RESULTS_VERSION}\n")
        return
    cols = list(agg[0])
    with open(path, "w", newline="") as fh:
        fh.write(f"# {RESULTS_VERSION}\n")
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(cols)
        for row in agg:
            w.writerow([format_value(row[c]) for c in cols])


def default_direction_grids(n0: int = DESK_N0, replicas: int = DESK_REPLICAS,
                            seed: int = 2013) -> list[SweepGrid]:
    """One-factor-at-a-time design used for the influence matrix.

    p is compared on the unattacked network and under a uniform attack at
    eta = 0.7, which leaves enough finite clusters to fit tau. m is compared
    under a uniform attack at eta = 0.8, since at m = 5 lighter attacks leave
    almost no finite clusters. eta is varied between 0.2 and 0.5 under each
    attack kind.
    """
    return [
        SweepGrid(n0=(n0,), m=(3,), p=(0.0, 1.0), attack=("none",), eta=(0.0,),
                  replicas=replicas, seed=seed),
        SweepGrid(n0=(n0,), m=(3,), p=(0.0, 1.0), attack=("general",), eta=(0.7,),
                  replicas=replicas, seed=seed + 1),
        SweepGrid(n0=(n0,), m=(2, 5), p=(0.5,), attack=("general",), eta=(0.8,),
                  replicas=replicas, seed=seed + 2),
        SweepGrid(n0=(n0,), m=(3,), p=(0.5,), attack=("central", "general", "peripheral"),
                  eta=(0.2, 0.5), replicas=replicas, seed=seed + 3),
    ]


# -- reports -----------------------------------------------------------------

UP, DOWN, FLAT, BOTH, NA = "↑", "↓", "∘", "↕", "n/a"


@dataclass
class DirectionReport:
    """Influence of each input on each output.

    ``matrix[(output, input)]`` holds one of ``↑ ↓ ∘ ↕ n/a``; ``details``
    keeps the per-context comparisons that produced it.
    """

    matrix: dict[tuple[str, str], str]
    details: dict[tuple[str, str], list[dict]] = field(default_factory=dict)

    def table(self) -> str:
        lines = ["output      " + "  ".join(f"{i:>4}" for i in INPUTS)]
        for o in OUTPUTS:
            lines.append(f"{o:<12}" + "  ".join(f"{self.matrix[(o, i)]:>4}" for i in INPUTS))
        return "\n".join(lines)


def compare_groups(lo: Sequence[float], hi: Sequence[float], alpha: float,
                   min_effect: float) -> tuple[str, float, float]:
    """Direction of ``hi`` relative to ``lo`` with Welch's t-test.

    Returns ``(symbol, p_value, relative_change)``. A change counts only if it
    is significant at ``alpha`` and at least ``min_effect`` relative to the
    low-side mean.
    """
    x = np.asarray(lo, dtype=np.float64)
    y = np.asarray(hi, dtype=np.float64)
    x = x[~np.isnan(x)]
    y = y[~np.isnan(y)]
    if x.size < 2 or y.size < 2:
        return NA, math.nan, math.nan
    diff = float(y.mean() - x.mean())
    if np.ptp(x) == 0 and np.ptp(y) == 0:
        pval = 1.0 if diff == 0 else 0.0
    else:
        pval = float(stats.ttest_ind(y, x, equal_var=False).pvalue)
    base = abs(float(x.mean()))
    rel = diff / base if base > 0 else (math.inf if diff else 0.0)
    if pval < alpha and abs(rel) >= min_effect and diff != 0:
        return (UP if diff > 0 else DOWN), pval, rel
    return FLAT, pval, rel


def _combine(symbols: Sequence[str]) -> str:
    s = [x for x in symbols if x != NA]
    if not s:
        return NA
    if UP in s and DOWN in s:
        return BOTH
    signed = [x for x in s if x in (UP, DOWN)]
    if signed and len(signed) >= len(s) - len(signed):
        return signed[0]
    return FLAT


def direction_report(rows: Sequence[dict], alpha: float = 0.05,
                     min_effect: float = 0.05) -> DirectionReport:
    """Table of how each input moves each output.

    For an input, rows that agree on every other input form a context; each
    context compares the replicas at its smallest and largest input value.
    Contexts are combined as follows: opposite significant directions give
    ``↕``, otherwise the majority of signed vs ``∘`` verdicts wins (ties go
    to the signed direction). ``eta`` contexts are separated by attack kind
    and skip unattacked rows.
    """
    ok = [r for r in rows if r.get("status", "ok") == "ok"]
    keys = {"p": ("n0", "m", "attack", "eta"), "m": ("n0", "p", "attack", "eta"),
            "eta": ("n0", "m", "p", "attack")}
    matrix: dict[tuple[str, str], str] = {}
    details: dict[tuple[str, str], list[dict]] = {}
    for inp in INPUTS:
        contexts: dict[tuple, list[dict]] = {}
        for r in ok:
            if inp == "eta" and r["attack"] == "none":
                continue
            contexts.setdefault(tuple(r[k] for k in keys[inp]), []).append(r)
        for out in OUTPUTS:
            verdicts = []
            info = []
            for ctx, group in sorted(contexts.items(), key=lambda kv: str(kv[0])):
                values = sorted({r[inp] for r in group})
                if len(values) < 2:
                    continue
                lo = [r[out] for r in group if r[inp] == values[0]]
                hi = [r[out] for r in group if r[inp] == values[-1]]
                sym, pval, rel = compare_groups(lo, hi, alpha, min_effect)
                verdicts.append(sym)
                info.append({"context": dict(zip(keys[inp], ctx)), "lo": values[0],
                             "hi": values[-1], "symbol": sym, "p_value": pval, "rel": rel})
            matrix[(out, inp)] = _combine(verdicts)
            details[(out, inp)] = info
    return DirectionReport(matrix, details)


def range_check(rows: Sequence[dict]) -> dict[str, dict]:
    """Observed min/max of each output next to the reference bounds.

    Informational: ``inside`` says whether the observed span sits within the
    open interval; it is never used as a pass/fail gate.
    """
    ok = [r for r in rows if r.get("status", "ok") == "ok"]
    if not ok:
        raise ParameterError("range check needs at least one successful row")
    out = {}
    for col, (lo, hi) in REFERENCE_BOUNDS.items():
        v = np.array([r[col] for r in ok], dtype=np.float64)
        v = v[~np.isnan(v)]
        if v.size == 0:
            out[col] = {"min": math.nan, "max": math.nan, "bounds": (lo, hi),
                        "inside": None, "n": 0}
            continue
        vmin, vmax = float(v.min()), float(v.max())
        out[col] = {"min": vmin, "max": vmax, "bounds": (lo, hi),
                    "inside": bool(lo < vmin and vmax < hi),
                    "n": int(v.size)}
    return out


def format_range_check(rc: dict[str, dict]) -> str:
    lines = [f"{'output':<12}{'min':>10}{'max':>10}   reference   flag"]
    for col, d in rc.items():
        lo, hi = d["bounds"]
        flag = "n/a" if d["inside"] is None else ("inside" if d["inside"] else "outside")
        lines.append(f"{col:<12}{d['min']:>10.4g}{d['max']:>10.4g}   ({lo:g}, {hi:g})  {flag}")
    return "\n".join(lines)


# -- config files --------------------------------------------------------------

CONFIG_KEYS = ("n0", "m", "p", "attack", "eta", "seed", "replicas", "out", "export",
               "workers", "per_link", "recompute")


def read_config(path) -> dict[str, str]:
    """Flat ``key = value`` file; ``#`` starts a comment; lists are comma separated."""
    cfg: dict[str, str] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ParameterError(f"{path}:{lineno}: expected key = value")
            key, value = (s.strip() for s in line.split("=", 1))
            if key not in CONFIG_KEYS:
                raise ParameterError(f"{path}:{lineno}: unknown key {key!r}")
            cfg[key] = value
    return cfg


def parse_list(text: str, kind=float) -> list:
    items = [s.strip() for s in str(text).split(",") if s.strip()]
    if not items:
        raise ParameterError(f"empty list {text!r}")
    try:
        return [kind(s) for s in items]
    except ValueError as exc:
        raise ParameterError(f"cannot parse {text!r}: {exc}") from None


def parse_int(text) -> int:
    try:
        v = float(text)
    except ValueError:
        raise ParameterError(f"not a number: {text!r}") from None
    if v != int(v):
        raise ParameterError(f"not an integer: {text!r}")
    return int(v)


def default_workers() -> int:
    return max(1, min(8, os.cpu_count() or 1))


__all__ = [
    "RunConfig", "SweepGrid", "Realization", "realize", "run_single", "run_replicas",
    "run_sweep", "aggregate", "direction_report", "range_check", "read_results",
    "write_results", "default_direction_grids", "__version__",
]
