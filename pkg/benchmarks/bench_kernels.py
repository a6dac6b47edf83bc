"""Compare the compiled and pure-Python kernel backends.

    python3 benchmarks/bench_kernels.py [--n0 30000] [--repeat 3]

Every kernel runs on identical inputs and RNG state in both backends; the
outputs are checked for equality before timings are reported.
"""

from __future__ import annotations

import argparse
import sys
import time

import numpy as np

from growdestroy import _kernels
from growdestroy.metrics import CsrView
from growdestroy.rng import RngStream


def best_of(fn, repeat):
    best, out = float("inf"), None
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t)
    return best, out


def same(a, b):
    if isinstance(a, tuple):
        return all(np.array_equal(x, y) for x, y in zip(a, b))
    return np.array_equal(a, b)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n0", type=int, default=30_000)
    ap.add_argument("--m", type=int, default=3)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)

    if _kernels.BACKEND != "cython":
        print("compiled core not available; build it with `pip install -e .`", file=sys.stderr)
        return 1
    py, cy = _kernels.get_backend("python"), _kernels.get_backend("cython")

    _, edges = cy.grow_edges(args.n0, args.m, 0.5, False, RngStream(1))
    view = CsrView.from_edges(args.n0, edges)
    n_remove = int(0.4 * args.n0)
    weights = np.random.default_rng(0).random(1000)

    cases = {
        "grow_edges": lambda k: k.grow_edges(args.n0, args.m, 0.5, False, RngStream(1)),
        "attack central": lambda k: k.attack_order(*view, _kernels.CENTRAL, n_remove, True,
                                                   RngStream(2)),
        "attack general": lambda k: k.attack_order(*view, _kernels.GENERAL, n_remove, True,
                                                   RngStream(2)),
        "component_labels": lambda k: k.component_labels(*view),
        "local_clustering": lambda k: k.local_clustering_all(*view),
        "weighted_draws": lambda k: k.weighted_draws(weights, 10**5, RngStream(3)),
    }

    print(f"N0={args.n0} m={args.m} best of {args.repeat}")
    print(f"{'kernel':<18}{'python s':>10}{'cython s':>10}{'speedup':>9}  equal")
    for name, fn in cases.items():
        tp, op = best_of(lambda: fn(py), args.repeat)
        tc, oc = best_of(lambda: fn(cy), args.repeat)
        print(f"{name:<18}{tp:>10.4f}{tc:>10.4f}{tp / tc:>8.1f}x  {same(op, oc)}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
