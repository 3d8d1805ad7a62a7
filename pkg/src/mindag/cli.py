"""Command-line front end.

Every subcommand reads and writes flat files; exit status 0 means the
operation succeeded, 1 a negative logical verdict (goal unproved, check
failed, deduction rejected), 2 malformed input.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from mindag.formulas import (
    FormulaError,
    Sequent,
    format_formula,
    parse_formula,
    parse_sequent,
)
from mindag.ndtree import (
    TreeError,
    check_tree,
    eliminate_repetitions,
    proves_tree,
    tree_metrics,
    uses_repetition,
)
from mindag.nddag import DagError, check_dag, unfold_dag, verify_dag_stats
from mindag.compress import CompressError, compress_and_certify
from mindag.lm import DEFAULT_BOUND_MULTIPLIER, prove_lm, translate_lm_to_nd
from mindag.hamilton import (
    GraphError,
    classical_sat,
    encode_alpha,
    hamiltonicity_oracle,
    parse_graph,
    rho_g,
)
from mindag.serialize import (
    SerializeError,
    dag_from_json,
    dag_to_dot,
    dag_to_json,
    lm_from_json,
    lm_to_json,
    tree_from_json,
    tree_to_dot,
    tree_to_json,
)

OK, VERDICT_NO, BAD_INPUT = 0, 1, 2


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise SerializeError(f"cannot read {path}: {exc.strerror}") from exc


def _emit(text: str, output) -> None:
    if output:
        Path(output).write_text(text)
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _cmd_parse(args) -> int:
    text = _read(args.input).strip() if args.input else args.goal
    if text is None:
        print("error: provide --goal or --input", file=sys.stderr)
        return BAD_INPUT
    if "=>" in text:
        seq = parse_sequent(text)
        payload = {"sequent": str(seq), "weight": seq.weight}
    else:
        f = parse_formula(text)
        payload = {"formula": format_formula(f), "weight": f.weight}
    if args.format == "json":
        _emit(json.dumps(payload, indent=2), args.output)
    else:
        _emit(" ".join(f"{k}={v}" for k, v in payload.items()), args.output)
    return OK


def _cmd_check_tree(args) -> int:
    ded = tree_from_json(_read(args.input))
    report = check_tree(ded)
    proves = report.locally_correct and proves_tree(ded)
    if args.format == "json":
        m = tree_metrics(ded) if report.locally_correct else None
        payload = {
            "locally_correct": report.locally_correct,
            "proves": proves,
            "violations": list(report.violations),
        }
        if m:
            payload["metrics"] = {"h": m.h, "phi": m.phi, "w": m.w,
                                  "normal": m.normal,
                                  "weak_subformula": m.weak_subformula}
        _emit(json.dumps(payload, indent=2), args.output)
    else:
        lines = [f"locally_correct: {report.locally_correct}",
                 f"proves: {proves}"]
        lines += [f"violation: {v}" for v in report.violations]
        _emit("\n".join(lines), args.output)
    return OK if report.locally_correct else VERDICT_NO


def _cmd_check_dag(args) -> int:
    d = dag_from_json(_read(args.input))
    report = check_dag(d)
    if args.format == "json":
        _emit(json.dumps({"ok": report.ok,
                          "violations": list(report.violations)},
                         indent=2), args.output)
    else:
        lines = [f"ok: {report.ok}"]
        lines += [f"violation: {v}" for v in report.violations]
        _emit("\n".join(lines), args.output)
    return OK if report.ok else VERDICT_NO


def _cmd_prove_lm(args) -> int:
    text = _read(args.input).strip() if args.input else args.goal
    if text is None:
        print("error: provide --goal or --input", file=sys.stderr)
        return BAD_INPUT
    goal = parse_sequent(text if "=>" in text else "=> " + text)
    res = prove_lm(goal, bound_multiplier=args.bound_mult)
    if res.status == "proved":
        _emit(lm_to_json(res.proof), args.output)
        print(f"proved: {goal} (visited {res.visited})", file=sys.stderr)
        return OK
    if res.status == "budget_exceeded":
        print(f"search budget exceeded at depth bound {res.depth_bound} "
              f"(visited {res.visited})", file=sys.stderr)
        return VERDICT_NO
    print(f"unproved at bound {res.depth_bound} (visited {res.visited})",
          file=sys.stderr)
    return VERDICT_NO


def _cmd_translate(args) -> int:
    if (args.goal is None) == (args.input is None):
        print("error: provide exactly one of --goal or --input",
              file=sys.stderr)
        return BAD_INPUT
    if args.goal is not None:
        goal = parse_sequent(args.goal if "=>" in args.goal
                             else "=> " + args.goal)
        res = prove_lm(goal, bound_multiplier=args.bound_mult)
        if not res.proved:
            print(f"unproved at bound {res.depth_bound}", file=sys.stderr)
            return VERDICT_NO
        proof = res.proof
    else:
        proof = lm_from_json(_read(args.input))
    tree = translate_lm_to_nd(proof)
    if args.format == "dot":
        _emit(tree_to_dot(tree), args.output)
    else:
        _emit(tree_to_json(tree), args.output)
    return OK


def _cmd_compress(args) -> int:
    ded = tree_from_json(_read(args.input))
    try:
        cert = compress_and_certify(ded)
    except CompressError as exc:
        print(f"compression rejected: {exc}", file=sys.stderr)
        return VERDICT_NO
    if args.format == "dot":
        _emit(dag_to_dot(cert.dag), args.output)
    else:
        _emit(dag_to_json(cert.dag), args.output)
    print(" ".join(f"{k}={v}" for k, v in cert.metrics.items()),
          file=sys.stderr)
    return OK if cert.verified else VERDICT_NO


def _cmd_verify(args) -> int:
    d = dag_from_json(_read(args.input))
    out = verify_dag_stats(d)
    payload = {"ok": out.ok, "af_correct": out.af_correct,
               "open_assumptions": sorted(format_formula(f)
                                          for f in out.root_assumptions),
               "steps": out.steps}
    if out.error:
        payload["error"] = out.error
    if args.format == "json":
        _emit(json.dumps(payload, indent=2), args.output)
    else:
        _emit("\n".join(f"{k}: {v}" for k, v in payload.items()),
              args.output)
    return OK if out.ok else VERDICT_NO


def _cmd_unfold(args) -> int:
    d = dag_from_json(_read(args.input))
    tree = unfold_dag(d)
    if args.no_reps and uses_repetition(tree):
        tree = eliminate_repetitions(tree)
    if args.format == "dot":
        _emit(tree_to_dot(tree), args.output)
    else:
        _emit(tree_to_json(tree), args.output)
    return OK


def _cmd_encode_ham(args) -> int:
    g = parse_graph(_read(args.input))
    outdir = Path(args.output or ".")
    outdir.mkdir(parents=True, exist_ok=True)
    alpha = encode_alpha(g)
    translated = rho_g(g)
    (outdir / "graph.txt").write_text(str(g) + "\n")
    (outdir / "alpha.txt").write_text(str(alpha) + "\n")
    (outdir / "rho.txt").write_text(format_formula(translated.gamma_star)
                                    + "\n")
    manifest = {
        "graph": "graph.txt",
        "alpha": "alpha.txt",
        "rho": "rho.txt",
        "vertices": g.n,
        "edges": len(g.edges),
        "hamiltonian": hamiltonicity_oracle(g),
        "alpha_satisfiable": classical_sat(alpha) if g.n <= args.max_n
        else None,
        "alpha_weight": alpha.weight,
        "rho_weight": translated.gamma_star.weight,
        "cube_budget": alpha.weight ** 3,
    }
    (outdir / "manifest.json").write_text(json.dumps(manifest, indent=2)
                                          + "\n")
    print(f"wrote {outdir}/manifest.json", file=sys.stderr)
    return OK


def _cmd_bench(args) -> int:
    from mindag.bench import run_bench

    summary = run_bench(args.output or "bench-out", seed=args.seed,
                        count=args.count, max_weight=args.max_weight,
                        max_n=args.max_n)
    sys.stdout.write(json.dumps(summary, indent=2) + "\n")
    return OK


def _parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="mindag",
        description="check, compress, and verify implicational proofs")
    sub = top.add_subparsers(dest="command", required=True)

    def common(p, fmt=("json", "dot", "text"), default_fmt="json"):
        p.add_argument("--input", help="input file")
        p.add_argument("--output", help="output file (default stdout)")
        p.add_argument("--format", choices=fmt, default=default_fmt)

    p = sub.add_parser("parse", help="echo a parsed formula or sequent")
    common(p, fmt=("json", "text"), default_fmt="text")
    p.add_argument("--goal", help="formula or sequent text")
    p.set_defaults(func=_cmd_parse)

    p = sub.add_parser("check-tree", help="validate a tree deduction")
    common(p, fmt=("json", "text"), default_fmt="text")
    p.set_defaults(func=_cmd_check_tree)

    p = sub.add_parser("check-dag", help="validate a dag deduction")
    common(p, fmt=("json", "text"), default_fmt="text")
    p.set_defaults(func=_cmd_check_dag)

    p = sub.add_parser("prove-lm", help="backward proof search")
    common(p, fmt=("json",), default_fmt="json")
    p.add_argument("--goal", help="sequent text, e.g. '=> p->p'")
    p.add_argument("--bound-mult", type=float,
                   default=DEFAULT_BOUND_MULTIPLIER)
    p.set_defaults(func=_cmd_prove_lm)

    p = sub.add_parser("translate",
                       help="sequent proof to natural deduction")
    common(p)
    p.add_argument("--goal", help="sequent to prove first")
    p.add_argument("--bound-mult", type=float,
                   default=DEFAULT_BOUND_MULTIPLIER)
    p.set_defaults(func=_cmd_translate)

    p = sub.add_parser("compress", help="tree to certified dag")
    common(p)
    p.set_defaults(func=_cmd_compress)

    p = sub.add_parser("verify", help="check a dag deduction end to end")
    common(p, fmt=("json", "text"), default_fmt="text")
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("unfold", help="dag back to a tree deduction")
    common(p)
    p.add_argument("--no-reps", action="store_true",
                   help="also eliminate repetition rules")
    p.set_defaults(func=_cmd_unfold)

    p = sub.add_parser("encode-ham",
                       help="Hamiltonian-path encoding artifacts")
    common(p, fmt=("json",), default_fmt="json")
    p.add_argument("--max-n", type=int, default=5,
                   help="largest n for the brute-force check")
    p.set_defaults(func=_cmd_encode_ham)

    p = sub.add_parser("bench", help="measure the full pipeline")
    common(p, fmt=("json",), default_fmt="json")
    p.add_argument("--seed", type=int, default=2026)
    p.add_argument("--count", type=int, default=120)
    p.add_argument("--max-weight", type=int, default=40)
    p.add_argument("--max-n", type=int, default=4)
    p.set_defaults(func=_cmd_bench)
    return top


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    needs_input = args.command in {"check-tree", "check-dag", "compress",
                                   "verify", "unfold", "encode-ham"}
    if needs_input and not args.input:
        print("error: --input is required", file=sys.stderr)
        return BAD_INPUT
    try:
        return args.func(args)
    except (FormulaError, SerializeError, GraphError) as exc:
        src = f" in {args.input}" if getattr(args, "input", None) else ""
        print(f"error{src}: {exc}", file=sys.stderr)
        return BAD_INPUT
    except (TreeError, DagError, CompressError) as exc:
        print(f"rejected: {exc}", file=sys.stderr)
        return VERDICT_NO


if __name__ == "__main__":
    sys.exit(main())
