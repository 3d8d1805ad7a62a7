import json
import math

import pytest

from mindag.bench import (
    MetricsRecord,
    SCHEMA_VERSION,
    collect_records,
    fit_loglog,
    read_csv,
    rho_growth,
    run_bench,
    write_csv,
)
from mindag.formulas import parse_formula


def _rec(w_dag: int, steps: int) -> MetricsRecord:
    return MetricsRecord(
        schema=SCHEMA_VERSION, goal="p->p", weight=3, h_lm=1,
        h_tree=1, h_dag=1, phi=4, w_tree=5, w_dag=w_dag, fsp_size=1,
        bound_ok=True, verify_ok=True, checker_steps=steps, wall_time=0.5)


def test_csv_round_trip(tmp_path):
    records = [_rec(10, 40), _rec(20, 90)]
    path = tmp_path / "metrics.csv"
    write_csv(records, path)
    assert read_csv(path) == records


def test_loglog_fit_recovers_a_known_exponent():
    records = [_rec(w, round(w ** 2.5)) for w in (4, 8, 16, 32, 64)]
    slope, intercept, x, y, resid = fit_loglog(records)
    assert slope == pytest.approx(2.5, abs=0.01)
    assert max(abs(r) for r in resid) < 0.01
    assert len(x) == len(y) == 5


def test_loglog_fit_needs_enough_points():
    with pytest.raises(ValueError):
        fit_loglog([_rec(10, 40)])


def test_collected_records_are_verified_and_bounded():
    records = collect_records(6, count=5, max_weight=18)
    assert records
    for r in records:
        assert r.schema == SCHEMA_VERSION
        assert r.verify_ok and r.bound_ok
        assert r.h_dag <= 2 * r.h_tree
        assert r.w_dag <= r.h_dag * r.phi ** 2
        assert r.checker_steps > 0 and r.wall_time >= 0
        assert parse_formula(r.goal).weight == r.weight


def test_rho_growth_table():
    rows = rho_growth(max_n=2)
    assert len(rows) == 4
    by_key = {(r["n"], r["graph"]): r for r in rows}
    assert by_key[(1, "complete")]["hamiltonian"]
    assert by_key[(1, "empty")]["hamiltonian"]          # a lone vertex is a path
    assert by_key[(2, "complete")]["hamiltonian"]
    assert not by_key[(2, "empty")]["hamiltonian"]
    assert by_key[(1, "complete")]["prover_status"] in (
        "proved", "unproved", "budget_exceeded")
    for kind in ("complete", "empty"):
        assert by_key[(2, kind)]["rho_weight"] > by_key[(1, kind)]["rho_weight"]
    for r in rows:
        assert r["cube_budget"] == r["alpha_weight"] ** 3


def test_run_bench_writes_all_artifacts(tmp_path):
    summary = run_bench(tmp_path, seed=5, count=6, max_weight=18, max_n=2)
    assert summary["schema_version"] == SCHEMA_VERSION
    assert summary["count"] > 0
    assert summary["verify_rate"] == 1.0
    assert summary["bound_fraction"] == 1.0
    assert summary["bound_violations"] == 0
    assert summary["fit_slope"] < 4.0
    assert not math.isnan(summary["fit_intercept"])

    on_disk = json.loads((tmp_path / "summary.json").read_text())
    assert on_disk == summary

    records = read_csv(tmp_path / "metrics.csv")
    assert len(records) == summary["count"]
    assert (tmp_path / "rho_growth.csv").read_text().startswith("n,graph,")

    for fig in summary["files"]["figures"]:
        data = (tmp_path / fig).read_bytes() if not fig.startswith("/") \
            else open(fig, "rb").read()
        assert data[:4] == b"\x89PNG"
    assert len(summary["files"]["figures"]) == 3
