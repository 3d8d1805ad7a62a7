"""End-to-end acceptance gate.

Each test exercises one headline guarantee at desk scale and prints a
single `acceptance k/7: PASS/FAIL` line so a bare pytest run doubles as
a checklist.  Corpus sizes, tolerances, and wall-clock ceilings are
pinned here on purpose; loosening them is a design change, not a tweak.
"""

import json
import random
import time

import pytest

from mindag.bench import run_bench
from mindag.compress import compress_and_certify
from mindag.formulas import (
    FormulaTable,
    FullFormulaTable,
    parse_formula,
    sequent,
)
from mindag.generate import dag_pool, random_full_formula, random_provable_formulas
from mindag.hamilton import (
    all_digraphs,
    classical_sat,
    cube_bound_holds,
    encode_alpha,
    hamiltonicity_oracle,
    random_digraph,
)
from mindag.lm import prove_lm, translate_lm_to_nd
from mindag.ndtree import eliminate_repetitions, proves_tree, uses_repetition
from mindag.nddag import check_dag, compute_af, unfold_dag, verify_by_threads, verify_dag

SEED = 2026
CORPUS_SIZE = 100


def report(k, ok, detail):
    print(f"acceptance {k}/7: {'PASS' if ok else 'FAIL'} — {detail}")
    assert ok, detail


@pytest.fixture(scope="module")
def certified():
    """Prove, translate, and compress the 100-formula corpus once."""
    t0 = time.monotonic()
    items = []
    for f in random_provable_formulas(SEED, CORPUS_SIZE, max_weight=40):
        res = prove_lm(sequent((), f))
        assert res.proved
        tree = translate_lm_to_nd(res.proof)
        cert = compress_and_certify(tree)
        items.append((f, tree, cert))
    return items, time.monotonic() - t0


@pytest.fixture(scope="module")
def graph_corpus():
    rng = random.Random(SEED)
    n3 = list(all_digraphs(3))
    rand45 = [random_digraph(rng, rng.choice((4, 5))) for _ in range(50)]
    return n3, rand45


def test_1_checker_agrees_with_thread_oracle(certified):
    t0 = time.monotonic()
    pool = dag_pool(SEED, 1000, max_nodes=30, table=FormulaTable())
    assert all(len(d.nodes) <= 30 for d in pool)
    dags = pool + [cert.dag for _, _, cert in certified[0]]
    disagreements = 0
    for d in dags:
        assert check_dag(d).ok
        compute_af(d)  # raises if the selector leaves a live edge bare
        if verify_dag(d) != verify_by_threads(d):
            disagreements += 1
    elapsed = time.monotonic() - t0
    ok = len(dags) >= 1000 and disagreements == 0 and elapsed < 60
    report(1, ok, f"{len(dags)} dags, {disagreements} disagreements, "
                  f"{elapsed:.1f}s (limit 60s)")


def test_2_compression_is_verified_and_bounded(certified):
    items, elapsed = certified
    verified = sum(cert.verified for _, _, cert in items)
    bounded = 0
    for _, _, cert in items:
        m = cert.metrics
        if (m["h_dag"] <= 2 * m["h_tree"]
                and m["w_dag"] <= m["h_dag"] * m["phi"] ** 2):
            bounded += 1
    ok = (verified == len(items) == CORPUS_SIZE
          and bounded == len(items) and elapsed < 120)
    report(2, ok, f"{verified}/{len(items)} verified, {bounded}/{len(items)} "
                  f"within height/weight bounds, {elapsed:.1f}s (limit 120s)")


def test_3_unfolding_round_trips(certified):
    items, _ = certified
    good = 0
    for f, _, cert in items:
        tree = unfold_dag(cert.dag)
        plain = eliminate_repetitions(tree)
        if (proves_tree(tree) and tree.root.label is f
                and proves_tree(plain) and plain.root.label is f
                and not uses_repetition(plain)):
            good += 1
    ok = good == len(items)
    report(3, ok, f"{good}/{len(items)} dags unfold to proving trees with "
                  f"the same conclusion, repetition-free after cleanup")


def test_4_path_encoding_matches_brute_force(graph_corpus):
    n3, rand45 = graph_corpus
    t0 = time.monotonic()
    table = FullFormulaTable()
    disagreements = 0
    for g in n3 + rand45:
        if hamiltonicity_oracle(g) != classical_sat(encode_alpha(g, table)):
            disagreements += 1
    elapsed = time.monotonic() - t0
    ok = disagreements == 0 and elapsed < 300
    report(4, ok, f"{len(n3)} exhaustive n=3 digraphs + {len(rand45)} random "
                  f"n in {{4,5}}, {disagreements} disagreements, "
                  f"{elapsed:.1f}s (limit 300s)")


def test_5_prover_verdicts_on_the_reference_formulas():
    positives = ["p->p", "p->q->p", "(p->(q->r))->((p->q)->(p->r))"]
    negatives = ["p", "((p->q)->p)->p"]
    good = 0
    for text in positives:
        res = prove_lm(sequent((), parse_formula(text)))
        if res.proved and proves_tree(translate_lm_to_nd(res.proof)):
            good += 1
    refused = 0
    for text in negatives:
        res = prove_lm(sequent((), parse_formula(text)))
        if res.status == "unproved":  # exhausted the bound, not the budget
            refused += 1
    ok = good == len(positives) and refused == len(negatives)
    report(5, ok, f"{good}/{len(positives)} proved and re-checked as trees, "
                  f"{refused}/{len(negatives)} refused exhaustively")


def test_6_translation_stays_within_the_cubic_budget(graph_corpus):
    n3, rand45 = graph_corpus
    table = FullFormulaTable()
    rng = random.Random(SEED)
    violations = 0
    checked = 0
    for _ in range(500):
        f = random_full_formula(rng, max_size=40, table=table)
        if not cube_bound_holds(f)[0]:
            violations += 1
        checked += 1
    small = list(all_digraphs(1)) + list(all_digraphs(2)) + n3
    graphs = small + [g for g in rand45 if g.n == 4]
    for g in graphs:
        goal = table.implication(encode_alpha(g, table), table.falsum())
        if not cube_bound_holds(goal)[0]:
            violations += 1
        checked += 1
    ok = violations == 0
    report(6, ok, f"{checked} goals ({len(graphs)} of them no-path encodings "
                  f"over n<=4 digraphs), {violations} over cubic budget")


def test_7_checker_cost_fits_a_low_degree_curve(tmp_path):
    summary = run_bench(tmp_path, seed=SEED, count=120, max_weight=40,
                        max_n=4)
    on_disk = json.loads((tmp_path / "summary.json").read_text())
    slope = on_disk["fit_slope"]
    fit_png = tmp_path / "checker_steps_fit.png"
    ok = (slope <= 4.0 and summary["fit_slope"] == slope
          and fit_png.exists()
          and fit_png.read_bytes()[:4] == b"\x89PNG")
    report(7, ok, f"log-log slope {slope:.2f} (limit 4.0), fit and "
                  f"residual panels rendered to {fit_png.name}")
