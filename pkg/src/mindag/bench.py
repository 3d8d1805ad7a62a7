"""Pipeline measurements: proof sizes, compression ratios, checker cost.

``run_bench`` drives goal formulas through prove → translate → compress
→ verify, writes one CSV row per goal, fits checker step counts against
dag weight on a log-log scale, and renders the figures next to the CSV.
"""

from __future__ import annotations

import csv
import json
import time
from dataclasses import asdict, dataclass, fields
from pathlib import Path
from typing import Optional

import numpy as np

from mindag.formulas import Sequent, format_formula
from mindag.lm import prove_lm, translate_lm_to_nd
from mindag.compress import CompressError, compress_and_certify
from mindag.generate import random_provable_formulas
from mindag.hamilton import DiGraph, encode_alpha, hamiltonicity_oracle, rho_g

SCHEMA_VERSION = 1


@dataclass
class MetricsRecord:
    schema: int
    goal: str
    weight: int
    h_lm: int
    h_tree: int
    h_dag: int
    phi: int
    w_tree: int
    w_dag: int
    fsp_size: int
    bound_ok: bool
    verify_ok: bool
    checker_steps: int
    wall_time: float


def collect_records(seed, count: int = 120, max_weight: int = 40
                    ) -> list[MetricsRecord]:
    """One record per provable goal, measured end to end."""
    out: list[MetricsRecord] = []
    goals = random_provable_formulas(seed, count, max_weight=max_weight)
    for goal in goals:
        t0 = time.perf_counter()
        res = prove_lm(Sequent((), goal))
        if not res.proved:       # prover settled it once already; be safe
            continue
        tree = translate_lm_to_nd(res.proof)
        try:
            cert = compress_and_certify(tree)
        except CompressError:
            continue
        wall = (time.perf_counter() - t0) * 1000.0
        m = cert.metrics
        out.append(MetricsRecord(
            schema=SCHEMA_VERSION,
            goal=format_formula(goal),
            weight=goal.weight,
            h_lm=res.proof.height,
            h_tree=m["h_tree"],
            h_dag=m["h_dag"],
            phi=m["phi"],
            w_tree=m["w_tree"],
            w_dag=m["w_dag"],
            fsp_size=m["fsp_size"],
            bound_ok=m["bound_ok"],
            verify_ok=cert.verified,
            checker_steps=m["checker_steps"],
            wall_time=round(wall, 3),
        ))
    return out


def write_csv(records: list[MetricsRecord], path) -> None:
    names = [f.name for f in fields(MetricsRecord)]
    with open(path, "w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=names)
        w.writeheader()
        for r in records:
            w.writerow(asdict(r))


def read_csv(path) -> list[MetricsRecord]:
    out = []
    with open(path, newline="") as fh:
        for row in csv.DictReader(fh):
            out.append(MetricsRecord(
                schema=int(row["schema"]),
                goal=row["goal"],
                weight=int(row["weight"]),
                h_lm=int(row["h_lm"]),
                h_tree=int(row["h_tree"]),
                h_dag=int(row["h_dag"]),
                phi=int(row["phi"]),
                w_tree=int(row["w_tree"]),
                w_dag=int(row["w_dag"]),
                fsp_size=int(row["fsp_size"]),
                bound_ok=row["bound_ok"] == "True",
                verify_ok=row["verify_ok"] == "True",
                checker_steps=int(row["checker_steps"]),
                wall_time=float(row["wall_time"]),
            ))
    return out


def fit_loglog(records: list[MetricsRecord]
               ) -> tuple[float, float, np.ndarray, np.ndarray, np.ndarray]:
    """Least-squares slope of log(checker_steps) against log(w_dag)."""
    pts = [(r.w_dag, r.checker_steps) for r in records
           if r.w_dag > 1 and r.checker_steps > 0]
    if len(pts) < 2:
        raise ValueError("need at least two usable records to fit")
    x = np.log(np.array([p[0] for p in pts], dtype=float))
    y = np.log(np.array([p[1] for p in pts], dtype=float))
    slope, intercept = np.polyfit(x, y, 1)
    residuals = y - (slope * x + intercept)
    return float(slope), float(intercept), x, y, residuals


def rho_growth(max_n: int = 4, attempt_prove_n1: bool = True) -> list[dict]:
    """Size rows for the graph encoding as the vertex count grows.

    For each ``n`` the row covers the complete digraph (has a
    Hamiltonian path) and the empty digraph (from ``n >= 2`` it has
    none).  An optional prover attempt on the smallest goal is recorded
    as a status; the bound or budget usually wins, which is fine.
    """
    rows = []
    for n in range(1, max_n + 1):
        for kind in ("complete", "empty"):
            edges = frozenset((u, v) for u in range(1, n + 1)
                              for v in range(1, n + 1) if u != v) \
                if kind == "complete" else frozenset()
            g = DiGraph(n, edges)
            alpha = encode_alpha(g)
            rho = rho_g(g)
            row = {
                "n": n,
                "graph": kind,
                "hamiltonian": hamiltonicity_oracle(g),
                "alpha_weight": alpha.weight,
                "rho_weight": rho.gamma_star.weight,
                "cube_budget": alpha.weight ** 3,
            }
            if n == 1 and kind == "complete" and attempt_prove_n1:
                res = prove_lm(Sequent((), rho.gamma_star),
                               node_budget=50_000)
                row["prover_status"] = res.status
            rows.append(row)
    return rows


def render_figures(records: list[MetricsRecord], outdir,
                   rho_rows: Optional[list[dict]] = None) -> list[str]:
    """Write the PNG figures and return their paths."""
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    made: list[str] = []

    slope, intercept, x, y, resid = fit_loglog(records)
    fig, (ax1, ax2) = plt.subplots(2, 1, figsize=(7, 8), sharex=True,
                                   height_ratios=[3, 1])
    ax1.scatter(x, y, s=14, alpha=0.6, label="runs")
    xs = np.linspace(x.min(), x.max(), 50)
    ax1.plot(xs, slope * xs + intercept, "r-",
             label=f"fit: slope {slope:.2f}")
    ax1.set_ylabel("log checker steps")
    ax1.set_title("Checker cost against dag weight")
    ax1.legend()
    ax2.scatter(x, resid, s=10, alpha=0.6)
    ax2.axhline(0.0, color="gray", lw=1)
    ax2.set_xlabel("log dag weight")
    ax2.set_ylabel("residual")
    fig.tight_layout()
    p = outdir / "checker_steps_fit.png"
    fig.savefig(p, dpi=120)
    plt.close(fig)
    made.append(str(p))

    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(10, 4.5))
    h_tree = np.array([r.h_tree for r in records])
    h_dag = np.array([r.h_dag for r in records])
    ax1.scatter(h_tree, h_dag, s=14, alpha=0.6)
    hs = np.linspace(0, h_tree.max() + 1, 20)
    ax1.plot(hs, 2 * hs, "r--", label="2 x tree height")
    ax1.set_xlabel("tree height")
    ax1.set_ylabel("dag height")
    ax1.legend()
    budget = np.array([r.h_dag * r.phi ** 2 for r in records], dtype=float)
    w_dag = np.array([r.w_dag for r in records], dtype=float)
    ax2.scatter(budget, w_dag, s=14, alpha=0.6)
    bs = np.linspace(0, budget.max() * 1.05, 20)
    ax2.plot(bs, bs, "r--", label="height x phi^2")
    ax2.set_xlabel("weight budget")
    ax2.set_ylabel("dag weight")
    ax2.legend()
    fig.suptitle("Compression bounds")
    fig.tight_layout()
    p = outdir / "bounds.png"
    fig.savefig(p, dpi=120)
    plt.close(fig)
    made.append(str(p))

    if rho_rows:
        fig, ax = plt.subplots(figsize=(7, 4.5))
        for kind, marker in (("complete", "o"), ("empty", "s")):
            rows = [r for r in rho_rows if r["graph"] == kind]
            ax.plot([r["n"] for r in rows],
                    [r["rho_weight"] for r in rows],
                    marker=marker, label=f"{kind} digraph")
        rows = [r for r in rho_rows if r["graph"] == "complete"]
        ax.plot([r["n"] for r in rows], [r["cube_budget"] for r in rows],
                "r--", label="cubic budget")
        ax.set_yscale("log")
        ax.set_xlabel("vertices")
        ax.set_ylabel("translated goal weight")
        ax.set_title("Graph goal growth")
        ax.legend()
        fig.tight_layout()
        p = outdir / "rho_growth.png"
        fig.savefig(p, dpi=120)
        plt.close(fig)
        made.append(str(p))
    return made


def run_bench(outdir, seed=2026, count: int = 120, max_weight: int = 40,
              max_n: int = 4) -> dict:
    """Collect records, write CSV + summary JSON, render figures."""
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    records = collect_records(seed, count=count, max_weight=max_weight)
    write_csv(records, outdir / "metrics.csv")
    rho_rows = rho_growth(max_n=max_n)
    with open(outdir / "rho_growth.csv", "w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=list(rho_rows[0].keys()),
                           extrasaction="ignore")
        w.writeheader()
        for row in rho_rows:
            w.writerow(row)
    figures = render_figures(records, outdir, rho_rows)
    slope, intercept, *_ = fit_loglog(records)
    summary = {
        "schema_version": SCHEMA_VERSION,
        "seed": seed if not hasattr(seed, "random") else None,
        "count": len(records),
        "max_weight": max_weight,
        "fit_slope": round(slope, 4),
        "fit_intercept": round(intercept, 4),
        "verify_rate": sum(r.verify_ok for r in records) / len(records),
        "bound_violations": sum(not r.bound_ok for r in records),
        "bound_fraction": sum(r.bound_ok for r in records) / len(records),
        "mean_wall_time": round(sum(r.wall_time for r in records)
                              / len(records), 3),
        "files": {
            "metrics": str(outdir / "metrics.csv"),
            "rho_growth": str(outdir / "rho_growth.csv"),
            "figures": figures,
        },
    }
    with open(outdir / "summary.json", "w") as fh:
        json.dump(summary, fh, indent=2)
    return summary
