"""Command line front end.

Exit codes: 0 success, 1 parameter error, 2 I/O error, 3 partial sweep failure.
"""

from __future__ import annotations

import argparse
import csv
import sys
from pathlib import Path

from . import __version__
from ._kernels import BACKEND
from .attack import AttackSpec
from .errors import ParameterError
from .generator import GenerationParams
from .metrics import REPORT_HEADER, format_value
from .sweep import (DESK_N0, DESK_REPLICAS, EXPORTS, RunConfig, SweepGrid, default_direction_grids,
                    default_workers, direction_report, failed_rows, format_range_check,
                    parse_int, parse_list, range_check, read_config, read_results, run_single,
                    run_sweep)

EXIT_OK, EXIT_PARAM, EXIT_IO, EXIT_PARTIAL = 0, 1, 2, 3


def _add_run_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", type=Path, help="key = value config file; flags override it")
    p.add_argument("--n0")
    p.add_argument("--m")
    p.add_argument("--p")
    p.add_argument("--attack", help="central|peripheral|general|none")
    p.add_argument("--eta")
    p.add_argument("--seed")
    p.add_argument("--replicas")
    p.add_argument("--out")
    p.add_argument("--export", help=f"comma separated subset of {','.join(EXPORTS)}")
    p.add_argument("--per-link", action="store_true", default=None,
                   help="draw the attachment mode per link instead of per node")
    p.add_argument("--batch-attack", action="store_true", default=None,
                   help="freeze removal weights at their pre-attack values")


def _merged(args: argparse.Namespace) -> dict[str, str]:
    cfg = read_config(args.config) if args.config else {}
    for key in ("n0", "m", "p", "attack", "eta", "seed", "replicas", "out", "export"):
        v = getattr(args, key, None)
        if v is not None:
            cfg[key] = str(v)
    if getattr(args, "workers", None) is not None:
        cfg["workers"] = str(args.workers)
    if args.per_link:
        cfg["per_link"] = "true"
    if args.batch_attack:
        cfg["recompute"] = "false"
    return cfg


def _flag(text: str) -> bool:
    t = str(text).strip().lower()
    if t in ("1", "true", "yes", "on"):
        return True
    if t in ("0", "false", "no", "off"):
        return False
    raise ParameterError(f"expected a boolean, got {text!r}")


def _exports(cfg: dict[str, str]) -> frozenset:
    names = {"report"}
    if cfg.get("export"):
        names |= {s.strip() for s in cfg["export"].split(",") if s.strip()}
    return frozenset(names)


def _print_rows(rows, fh=None) -> None:
    w = csv.writer(fh or sys.stdout, lineterminator="\n")
    w.writerow(REPORT_HEADER)
    for row in rows:
        w.writerow([format_value(row[c]) for c in REPORT_HEADER])


def cmd_generate(args) -> int:
    cfg = _merged(args)
    params = GenerationParams(
        n0=parse_int(cfg.get("n0", DESK_N0)),
        m=parse_int(cfg.get("m", 3)),
        p=parse_list(cfg.get("p", "0.5"))[0],
        per_link=_flag(cfg.get("per_link", "false")),
    )
    spec = AttackSpec(cfg.get("attack", "none"), parse_list(cfg.get("eta", "0"))[0],
                      _flag(cfg.get("recompute", "true")))
    run = RunConfig(params, spec, seed=parse_int(cfg.get("seed", 0)),
                    replicas=parse_int(cfg.get("replicas", 1)),
                    out=Path(cfg["out"]) if cfg.get("out") else None,
                    export=_exports(cfg))
    reports = [run_single(run, r) for r in range(run.replicas)]
    _print_rows([r.row() for r in reports])
    return EXIT_OK


def cmd_sweep(args) -> int:
    cfg = _merged(args)
    out = Path(cfg.get("out", "sweep_out"))
    workers = parse_int(cfg.get("workers", default_workers()))
    if args.preset == "influence":
        grids = default_direction_grids(
            n0=parse_int(cfg.get("n0", DESK_N0)),
            replicas=parse_int(cfg.get("replicas", DESK_REPLICAS)),
            seed=parse_int(cfg.get("seed", 2013)))
    else:
        grids = [SweepGrid(
            n0=parse_list(cfg.get("n0", str(DESK_N0)), parse_int),
            m=parse_list(cfg.get("m", "3"), parse_int),
            p=parse_list(cfg.get("p", "0.5")),
            attack=parse_list(cfg.get("attack", "none"), str),
            eta=parse_list(cfg.get("eta", "0")),
            replicas=parse_int(cfg.get("replicas", DESK_REPLICAS)),
            seed=parse_int(cfg.get("seed", 0)),
            per_link=_flag(cfg.get("per_link", "false")),
            recompute=_flag(cfg.get("recompute", "true")),
        )]
    rows = run_sweep(grids, workers=workers, out=out)
    failed = failed_rows(rows)
    print(f"{len(rows)} runs, {len(failed)} failed; results in {out / 'results.csv'}")
    for row in failed[:10]:
        print(f"  cell {row['cell']} replica {row['replica']}: {row['error']}", file=sys.stderr)
    return EXIT_PARTIAL if failed else EXIT_OK


def cmd_report(args) -> int:
    rows = read_results(args.results)
    rep = direction_report(rows, alpha=args.alpha, min_effect=args.min_effect)
    rc = range_check(rows)
    print("Influence of inputs on outputs")
    print(rep.table())
    print()
    print("Observed ranges")
    print(format_range_check(rc))
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        with open(out / "direction.csv", "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["output", "input", "direction"])
            for (o, i), sym in rep.matrix.items():
                w.writerow([o, i, sym])
        with open(out / "ranges.csv", "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["output", "min", "max", "lower", "upper", "inside"])
            for col, d in rc.items():
                w.writerow([col, format_value(d["min"]), format_value(d["max"]),
                            d["bounds"][0], d["bounds"][1], d["inside"]])
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="growdestroy", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version",
                        version=f"%(prog)s {__version__} ({BACKEND} kernels)")
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("generate", help="grow, attack and measure one network")
    _add_run_flags(gen)
    gen.set_defaults(func=cmd_generate)

    sw = sub.add_parser("sweep", help="run a parameter grid (list values comma separated)")
    _add_run_flags(sw)
    sw.add_argument("--workers", type=int)
    sw.add_argument("--preset", choices=("influence",),
                    help="run the built-in one-factor design for the influence matrix")
    sw.set_defaults(func=cmd_sweep)

    rep = sub.add_parser("report", help="influence matrix and ranges from a results CSV")
    rep.add_argument("results", type=Path)
    rep.add_argument("--alpha", type=float, default=0.05)
    rep.add_argument("--min-effect", type=float, default=0.05,
                     help="smallest relative change reported as a direction")
    rep.add_argument("--out")
    rep.set_defaults(func=cmd_report)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ParameterError as exc:
        print(f"parameter error: {exc}", file=sys.stderr)
        return EXIT_PARAM
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
