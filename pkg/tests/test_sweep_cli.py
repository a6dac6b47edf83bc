import hashlib
import math

import numpy as np
import pytest

from growdestroy import AttackSpec, GenerationParams
from growdestroy import sweep
from growdestroy.cli import main
from growdestroy.errors import ParameterError
from growdestroy.sweep import (RunConfig, SweepGrid, aggregate, compare_groups, direction_report,
                               range_check, read_config, read_results, run_single, run_sweep,
                               write_results)


def digest(path):
    return hashlib.sha256(path.read_bytes()).hexdigest()


def test_grid_row_count():
    rows = run_sweep(SweepGrid(n0=(300,), p=(0.0, 0.5, 1.0), replicas=3, seed=1))
    assert len(rows) == 9
    assert [(r["cell"], r["replica"]) for r in rows] == [(c, r) for c in range(3) for r in range(3)]
    assert all(r["status"] == "ok" for r in rows)


def test_grid_validation():
    with pytest.raises(ParameterError):
        SweepGrid(p=())
    with pytest.raises(ParameterError):
        SweepGrid(n0=(10,), attack=("general",), eta=(0.97,))


def test_results_roundtrip(tmp_path):
    rows = run_sweep(SweepGrid(n0=(400,), attack=("central",), eta=(0.0, 0.3), replicas=2))
    write_results(rows, tmp_path / "r.csv")
    back = read_results(tmp_path / "r.csv")
    assert len(back) == len(rows)
    for a, b in zip(rows, back):
        for k, v in a.items():
            if isinstance(v, float) and math.isnan(v):
                assert math.isnan(b[k])
            else:
                assert b[k] == v, k


def test_big_seed_survives_csv(tmp_path):
    rows = run_sweep(SweepGrid(n0=(50,), replicas=1, seed=2**63 + 12345))
    write_results(rows, tmp_path / "r.csv")
    assert read_results(tmp_path / "r.csv")[0]["seed"] == rows[0]["seed"]


def test_replica_independence():
    cfg = RunConfig(GenerationParams(500, 2), AttackSpec("general", 0.2), seed=3, replicas=3)
    forward = [run_single(cfg, r).row() for r in range(3)]
    backward = [run_single(cfg, r).row() for r in (2, 1, 0)]
    assert forward == backward[::-1]
    grid_rows = run_sweep(SweepGrid(n0=(500,), m=(2,), attack=("general",), eta=(0.2,),
                                    replicas=3, seed=3))
    for a, b in zip(forward, grid_rows):
        assert all(a[k] == b[k] or (a[k] != a[k] and b[k] != b[k]) for k in a)


def test_parallel_matches_serial():
    grid = SweepGrid(n0=(300,), p=(0.0, 1.0), attack=("peripheral",), eta=(0.3,), replicas=2)
    serial = run_sweep(grid, workers=1)
    parallel = run_sweep(grid, workers=2)
    assert [r["avg_c"] for r in serial] == [r["avg_c"] for r in parallel]
    assert [r["seed"] for r in serial] == [r["seed"] for r in parallel]


def test_failures_are_recorded_per_row(monkeypatch):
    real = sweep.realize

    def flaky(params, attack, seed):
        if params.p == 1.0:
            raise RuntimeError("boom")
        return real(params, attack, seed)

    monkeypatch.setattr(sweep, "realize", flaky)
    rows = run_sweep(SweepGrid(n0=(200,), p=(0.0, 1.0), replicas=2))
    assert [r["status"] for r in rows] == ["ok", "ok", "error", "error"]
    assert rows[2]["error"] == "RuntimeError: boom" and rows[2]["p"] == 1.0
    assert len(aggregate(rows)) == 1


def test_aggregate_statistics():
    rows = run_sweep(SweepGrid(n0=(400,), attack=("general",), eta=(0.3,), replicas=4))
    agg = aggregate(rows)[0]
    vals = [r["avg_k"] for r in rows]
    assert agg["replicas"] == 4
    assert agg["avg_k_mean"] == pytest.approx(np.mean(vals))
    assert agg["avg_k_std"] == pytest.approx(np.std(vals, ddof=1))


def test_doubling_replicas_keeps_means_within_three_se():
    small = aggregate(run_sweep(SweepGrid(n0=(1000,), attack=("general",), eta=(0.3,),
                                          replicas=8, seed=4)))[0]
    big = aggregate(run_sweep(SweepGrid(n0=(1000,), attack=("general",), eta=(0.3,),
                                        replicas=16, seed=4)))[0]
    for col in ("avg_k", "avg_c", "giant_frac", "gamma"):
        se = big[f"{col}_std"] / math.sqrt(big[f"{col}_valid"])
        assert abs(small[f"{col}_mean"] - big[f"{col}_mean"]) <= 3 * se + 1e-12


def test_giant_grows_with_m_under_uniform_attack():
    rows = run_sweep(SweepGrid(m=(2, 3, 5), attack=("general",), eta=(0.3,), replicas=4, seed=8))
    means = [a["giant_frac_mean"] for a in aggregate(rows)]
    assert means[0] < means[1] < means[2]


def test_compare_groups():
    lo, hi = [1.0, 1.1, 0.9, 1.0], [2.0, 2.1, 1.9, 2.0]
    assert compare_groups(lo, hi, 0.05, 0.0)[0] == "↑"
    assert compare_groups(hi, lo, 0.05, 0.0)[0] == "↓"
    assert compare_groups(lo, lo, 0.05, 0.0)[0] == "∘"
    assert compare_groups([1.0], hi, 0.05, 0.0)[0] == "n/a"
    # significant but below the practical-effect margin
    assert compare_groups([100.0, 100.1], [101.0, 101.1], 0.05, 0.05)[0] == "∘"


def test_direction_report_basics():
    rows = run_sweep(SweepGrid(n0=(2000,), m=(3,), p=(0.0, 1.0), replicas=6, seed=2))
    rep = direction_report(rows)
    assert rep.matrix[("avg_k", "p")] == "∘"
    assert rep.matrix[("avg_c", "p")] == "↓"
    assert rep.matrix[("giant_frac", "p")] == "∘"
    assert rep.matrix[("avg_k", "m")] == "n/a"
    assert rep.matrix[("tau", "eta")] == "n/a"
    assert "gamma" in rep.table()


def test_combine_rules():
    c = sweep._combine
    assert c(["↑", "↓", "∘"]) == "↕"
    assert c(["↓", "∘"]) == "↓"
    assert c(["↓", "∘", "∘"]) == "∘"
    assert c(["n/a"]) == "n/a"


def test_range_check_single_run():
    rows = run_sweep(SweepGrid(n0=(3000,), replicas=1))
    rc = range_check(rows)
    assert rc["avg_k"]["inside"] is True
    assert rc["giant_frac"]["max"] == 1.0 and rc["giant_frac"]["inside"] is False
    assert rc["tau"]["n"] == 0
    with pytest.raises(ParameterError):
        range_check([])


def test_config_parsing(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# demo\nn0 = 400\nm=2  # links\np = 0, 1\n\nattack = general\n")
    assert read_config(cfg) == {"n0": "400", "m": "2", "p": "0, 1", "attack": "general"}
    bad = tmp_path / "bad.cfg"
    bad.write_text("colour = blue\n")
    with pytest.raises(ParameterError):
        read_config(bad)
    bad.write_text("n0 400\n")
    with pytest.raises(ParameterError):
        read_config(bad)


def test_cli_generate_deterministic(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("n0 = 1500\nm = 3\np = 0.5\nattack = central\neta = 0.2\nseed = 42\n")
    for name in ("a", "b"):
        assert main(["generate", "--config", str(cfg), "--out", str(tmp_path / name),
                     "--export", "edges,nodes,hist,clusters"]) == 0
    outs = capsys.readouterr().out.strip().splitlines()
    files = sorted(p.name for p in (tmp_path / "a").iterdir())
    assert "run_c0_r0_edges.txt" in files and "results.csv" in files
    for f in files:
        assert digest(tmp_path / "a" / f) == digest(tmp_path / "b" / f)
    assert outs[1] == outs[3]


def test_cli_flags_override_config(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("n0 = 1500\nm = 3\n")
    assert main(["generate", "--config", str(cfg), "--n0", "600"]) == 0
    row = capsys.readouterr().out.strip().splitlines()[1].split(",")
    assert row[0] == "600" and row[5] == "600"


def test_cli_exit_codes(tmp_path, monkeypatch, capsys):
    assert main(["generate", "--n0", "3", "--m", "3"]) == 1
    assert main(["generate", "--n0", "100", "--attack", "sideways"]) == 1
    blocker = tmp_path / "file"
    blocker.write_text("x")
    assert main(["generate", "--n0", "100", "--out", str(blocker / "sub")]) == 2
    assert main(["report", str(tmp_path / "missing.csv")]) == 2

    real = sweep.realize

    def flaky(params, attack, seed):
        if params.p == 1.0:
            raise RuntimeError("boom")
        return real(params, attack, seed)

    monkeypatch.setattr(sweep, "realize", flaky)
    code = main(["sweep", "--n0", "200", "--p", "0,1", "--replicas", "2", "--workers", "1",
                 "--out", str(tmp_path / "sw")])
    assert code == 3
    assert "boom" in capsys.readouterr().err


def test_cli_sweep_and_report(tmp_path, capsys):
    out = tmp_path / "sw"
    assert main(["sweep", "--n0", "400", "--p", "0,0.5,1", "--replicas", "3", "--workers", "1",
                 "--seed", "9", "--out", str(out)]) == 0
    assert len(read_results(out / "results.csv")) == 9
    assert (out / "aggregate.csv").read_text().startswith("# growdestroy-results")
    capsys.readouterr()
    assert main(["report", str(out / "results.csv"), "--out", str(tmp_path / "rep")]) == 0
    text = capsys.readouterr().out
    assert "avg_k" in text and "reference" in text
    lines = (tmp_path / "rep" / "direction.csv").read_text(encoding="utf-8").splitlines()
    assert lines[0] == "output,input,direction" and len(lines) == 16


def test_cli_batch_attack_flag(tmp_path, capsys):
    base = ["generate", "--n0", "2000", "--attack", "central", "--eta", "0.3", "--seed", "1"]
    main(base)
    a = capsys.readouterr().out
    main(base + ["--batch-attack"])
    b = capsys.readouterr().out
    assert a != b
