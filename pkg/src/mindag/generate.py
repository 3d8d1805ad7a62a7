"""Seeded random corpora: formulas, deduction trees, and dag pools.

Everything here is deterministic given a seed.  The dag pool mixes four
sources — compressed proofs, leveled embeddings of proving trees,
embeddings of open trees, and selector mutants — so downstream checks
see both accepting and rejecting inputs.
"""

from __future__ import annotations

import random
from typing import Iterable, Optional

from mindag.formulas import (
    FULL_TABLE,
    TABLE,
    Formula,
    FormulaTable,
    FullFormula,
    FullFormulaTable,
    Sequent,
)
from mindag.ndtree import (
    ImpElim,
    ImpIntro,
    TreeDeduction,
    TreeNode,
    assumption,
    elim,
    intro,
    is_locally_correct,
    level_tree,
    open_leaves,
    proves_tree,
    repeat,
)
from mindag.nddag import (
    DagDeduction,
    DagError,
    check_dag,
    check_af_correctness,
    compute_af,
    tree_to_dag,
)
from mindag.compress import (
    CompressError,
    compress,
    compress_and_certify,
    extract_f,
    restrict_to_fsp,
)
from mindag.lm import DEFAULT_BOUND_MULTIPLIER, prove_lm, translate_lm_to_nd

DEFAULT_ALPHABET = ("p", "q", "r", "s")

# Smallest goal size at which the cubic translation bound is reliable.
# Exhaustive scans over shapes, connectives, and leaf-identification
# patterns show violations at sizes 1, 3, and 5 and none from 7 up,
# with the worst-case ratio shrinking as sizes grow.
CUBE_BOUND_FLOOR = 7


def _rng(seed) -> random.Random:
    return seed if isinstance(seed, random.Random) else random.Random(seed)


# --- implicational formulas --------------------------------------------------


def random_formula(seed, max_weight: int = 40,
                   alphabet: Iterable[str] = DEFAULT_ALPHABET,
                   table: Optional[FormulaTable] = None) -> Formula:
    """A random implication tree of weight at most ``max_weight``."""
    rng = _rng(seed)
    t = TABLE if table is None else table
    atoms = [t.atom(a) for a in alphabet]

    def go(budget: int) -> Formula:
        if budget < 3 or rng.random() < 0.35:
            return rng.choice(atoms)
        left = go((budget - 1) // 2)
        return t.implication(left, go(budget - 1 - left.weight))

    while True:
        f = go(max_weight)
        if f.weight <= max_weight:
            return f


def random_provable_formulas(seed, count: int, max_weight: int = 40,
                             bound_multiplier: float = DEFAULT_BOUND_MULTIPLIER,
                             alphabet: Iterable[str] = DEFAULT_ALPHABET,
                             table: Optional[FormulaTable] = None
                             ) -> list[Formula]:
    """``count`` distinct formulas the sequent prover accepts.

    Draws alternate between conclusions of random proving trees (always
    valid, though the prover must still find them inside its bound) and
    unconstrained random formulas, so the sample is not all of one
    shape.  Candidates the prover cannot settle within budget are
    discarded.
    """
    rng = _rng(seed)
    t = TABLE if table is None else table
    out: list[Formula] = []
    seen: set[int] = set()
    while len(out) < count:
        if rng.random() < 0.6:
            cand = random_proving_tree(rng, alphabet=alphabet,
                                       table=t).root.label
        else:
            cand = random_formula(rng, max_weight, alphabet, t)
        if cand.weight > max_weight or cand.id in seen:
            continue
        seen.add(cand.id)
        res = prove_lm(Sequent((), cand), bound_multiplier=bound_multiplier)
        if res.proved:
            out.append(cand)
    return out


# --- deduction trees ---------------------------------------------------------


def _grow_pool(rng: random.Random, steps: int, atoms: list[Formula],
               table: FormulaTable) -> list[TreeNode]:
    pool: list[TreeNode] = [assumption(rng.choice(atoms)) for _ in range(3)]
    for a in atoms[:2]:
        pool.append(assumption(table.implication(a, rng.choice(atoms))))
    for _ in range(steps):
        roll = rng.random()
        if roll < 0.40:
            n = rng.choice(pool)
            opens = [leaf.label for leaf in
                     open_leaves(TreeDeduction(n))]
            disc = rng.choice(opens) if opens and rng.random() < 0.7 \
                else rng.choice(atoms)
            pool.append(intro(disc, n, table))
        elif roll < 0.75:
            majors = [n for n in pool if n.label.lhs is not None]
            rng.shuffle(majors)
            done = False
            for major in majors:
                minors = [n for n in pool if n.label is major.label.lhs]
                if minors:
                    pool.append(elim(rng.choice(minors), major))
                    done = True
                    break
            if not done:
                pool.append(assumption(rng.choice(atoms)))
        else:
            pool.append(repeat([rng.choice(pool)]))
    return pool


def random_proving_tree(seed, steps: int = 10,
                        alphabet: Iterable[str] = DEFAULT_ALPHABET,
                        table: Optional[FormulaTable] = None
                        ) -> TreeDeduction:
    """A random tree in which every branch discharges its assumption.

    Built bottom-up from random assumptions, then closed by discharging
    every remaining open label at the root, so the conclusion is valid
    by construction.
    """
    rng = _rng(seed)
    t = TABLE if table is None else table
    pool = _grow_pool(rng, steps, [t.atom(a) for a in alphabet], t)
    node = max(rng.sample(pool, min(4, len(pool))),
               key=lambda n: len(TreeDeduction(n).nodes))
    remaining = {leaf.label.id: leaf.label
                 for leaf in open_leaves(TreeDeduction(node))}
    for _, label in sorted(remaining.items()):
        node = intro(label, node, t)
    ded = TreeDeduction(node)
    assert proves_tree(ded)
    return ded


def random_open_tree(seed, steps: int = 10,
                     alphabet: Iterable[str] = DEFAULT_ALPHABET,
                     table: Optional[FormulaTable] = None) -> TreeDeduction:
    """A random locally correct tree, usually with open assumptions."""
    rng = _rng(seed)
    t = TABLE if table is None else table
    pool = _grow_pool(rng, steps, [t.atom(a) for a in alphabet], t)
    interior = [n for n in pool if n.premises]
    pick = rng.sample(interior, min(3, len(interior))) if interior else pool
    ded = TreeDeduction(max(pick, key=lambda n: len(TreeDeduction(n).nodes)))
    assert is_locally_correct(ded)
    return ded


# --- dag pools ---------------------------------------------------------------


def _af_correct(d: DagDeduction) -> bool:
    if not check_dag(d).ok:
        return False
    try:
        return check_af_correctness(d, compute_af(d))
    except Exception:
        return False


def mutate_selector(seed, d: DagDeduction,
                    attempts: int = 12) -> Optional[DagDeduction]:
    """A variant of ``d`` with one selector entry altered, or ``None``.

    Candidate edits rewire one entry to a different non-empty subset of
    the node's in-edges or drop the entry; a mutant only comes back if
    it still passes the structural and bookkeeping checks.
    """
    rng = _rng(seed)
    if not d.selector:
        return None
    keys = sorted(d.selector,
                  key=lambda k: (k[0], k[1].id))
    for _ in range(attempts):
        key = rng.choice(keys)
        merged_node = key[0][0]
        ins = d.in_edges(merged_node)
        new = dict(d.selector)
        if rng.random() < 0.3 and len(new) > 1:
            del new[key]
        else:
            size = rng.randint(1, len(ins))
            new[key] = frozenset(rng.sample(ins, size))
            if new[key] == d.selector[key]:
                continue
        mutant = DagDeduction(list(d.nodes.values()), d.root, new)
        if _af_correct(mutant):
            return mutant
    return None


def random_merged_tree(seed, routes: int = 2, close: bool = True,
                       alphabet: Iterable[str] = DEFAULT_ALPHABET,
                       table: Optional[FormulaTable] = None
                       ) -> TreeDeduction:
    """A tree that merges into a dag with a genuine multi-group node.

    Derives one shared formula at the same depth along ``routes``
    different inference routes (eliminations with distinct minors,
    optionally a repetition or an introduction), then combines the
    routes so the merged node keeps several premise groups.  With
    ``close`` every assumption is discharged at the root.
    """
    rng = _rng(seed)
    t = TABLE if table is None else table
    atoms = [t.atom(a) for a in alphabet]
    routes = max(2, min(routes, 3))
    feeders = rng.sample(atoms, min(routes, len(atoms)))
    # scaffold labels live in their own namespace so no feeder atom can
    # double as an introduction body at the merged level
    beta, goal = t.atom("b0"), t.atom("g0")
    as_imp = rng.random() < 0.4
    shared = t.implication(rng.choice(atoms), t.atom("r0")) \
        if as_imp else t.atom("t0")

    def elim_route(x: Formula) -> TreeNode:
        return elim(assumption(x), assumption(t.implication(x, shared)))

    def rep_route(x: Formula) -> TreeNode:
        return repeat([elim_route(x)])

    def intro_route() -> TreeNode:
        return intro(shared.lhs, assumption(shared.rhs), t)

    builders = [lambda x=x: elim_route(x) for x in feeders]
    if as_imp and rng.random() < 0.5:
        builders[-1] = intro_route
    elif rng.random() < 0.4:
        builders[-1] = lambda: rep_route(feeders[-1])

    d = [b() for b in builders]
    si = t.implication
    if routes == 2:
        left = elim(d[0], assumption(si(shared, beta)))
        right = elim(d[1], assumption(si(shared, si(beta, goal))))
        ded_root = elim(left, right)
    else:
        u, v = t.atom("u0"), t.atom("v0")
        a1 = elim(d[0], assumption(si(shared, u)))
        a2 = elim(d[2], assumption(si(shared, si(u, v))))
        b1 = elim(d[1], assumption(si(shared, beta)))
        b2 = assumption(si(beta, si(v, goal)))
        ded_root = elim(elim(a1, a2), elim(b1, b2))
    if close:
        remaining = {leaf.label.id: leaf.label
                     for leaf in open_leaves(TreeDeduction(ded_root))}
        for _, label in sorted(remaining.items()):
            ded_root = intro(label, ded_root, t)
    ded = TreeDeduction(ded_root)
    assert is_locally_correct(ded)
    return ded


def merge_tree_full(tree: TreeDeduction) -> DagDeduction:
    """Merge a tree into a dag, retaining every premise group.

    Unlike the certification pipeline, which restricts the selector to a
    sparse path family and usually degrades merged nodes back to plain
    rules, this keeps the full image family, so repeated conclusions at
    a level stay merged with a populated selector.
    """
    leveled = level_tree(tree)
    res = compress(leveled)
    selector = extract_f(res.dag, res.paths)
    return restrict_to_fsp(res.dag, res.paths, selector)


def dag_pool(seed, count: int = 1000, max_nodes: int = 30,
             alphabet: Iterable[str] = DEFAULT_ALPHABET,
             table: Optional[FormulaTable] = None) -> list[DagDeduction]:
    """``count`` dags of at most ``max_nodes`` nodes, all of which pass
    the structural checker and the assumption-set bookkeeping check.

    Mixes compressed proof outputs, embeddings of proving and open
    trees, and selector mutants of the compressed dags, so verdicts are
    mixed and merged nodes with selectors are represented.
    """
    rng = _rng(seed)
    t = TABLE if table is None else table
    out: list[DagDeduction] = []
    compressed: list[DagDeduction] = []

    def admit(d: DagDeduction) -> bool:
        if len(d.nodes) > max_nodes or not _af_correct(d):
            return False
        out.append(d)
        return True

    def embed(tree: TreeDeduction) -> bool:
        if not isinstance(tree.root.rule, (ImpIntro, ImpElim)):
            return False
        try:
            return admit(tree_to_dag(level_tree(tree)))
        except DagError:
            return False

    goal_formulas = random_provable_formulas(rng, max(8, count // 40),
                                             max_weight=24,
                                             alphabet=alphabet, table=t)
    for f in goal_formulas:
        res = prove_lm(Sequent((), f))
        if not res.proved:
            continue
        tree = translate_lm_to_nd(res.proof)
        try:
            cert = compress_and_certify(tree)
        except CompressError:
            continue
        if admit(cert.dag):
            compressed.append(cert.dag)
        if len(out) >= count:
            return out

    while len(out) < count:
        roll = rng.random()
        if roll < 0.35:
            embed(random_proving_tree(rng, steps=rng.randint(4, 12),
                                      alphabet=alphabet, table=t))
        elif roll < 0.65:
            embed(random_open_tree(rng, steps=rng.randint(4, 12),
                                   alphabet=alphabet, table=t))
        elif roll < 0.9:
            tree = random_merged_tree(rng, routes=rng.randint(2, 3),
                                      alphabet=alphabet, table=t)
            try:
                d = merge_tree_full(tree)
            except CompressError:
                continue
            if admit(d) and d.selector:
                compressed.append(d)
        elif compressed:
            mutant = mutate_selector(rng, rng.choice(compressed))
            if mutant is not None:
                admit(mutant)
        else:
            embed(random_proving_tree(rng, steps=6, alphabet=alphabet,
                                      table=t))
    return out


# --- full formulas -----------------------------------------------------------


def random_full_formula(seed, max_size: int = 40,
                        min_size: int = CUBE_BOUND_FLOOR,
                        alphabet: Iterable[str] = ("a", "b", "c", "d"),
                        falsum_prob: float = 0.15,
                        table: Optional[FullFormulaTable] = None
                        ) -> FullFormula:
    """A random conjunction/disjunction/implication formula whose size
    lies in ``[min_size, max_size]``.

    The default lower bound keeps generated goals above the sizes where
    the cubic translation bound is known to fail.
    """
    rng = _rng(seed)
    t = FULL_TABLE if table is None else table
    names = list(alphabet)
    lo = max(1, (min_size + 1) // 2)
    hi = max(lo, (max_size + 1) // 2)
    k = rng.randint(lo, hi)

    def leaf() -> FullFormula:
        if rng.random() < falsum_prob:
            return t.falsum()
        return t.atom(rng.choice(names))

    def go(n: int) -> FullFormula:
        if n == 1:
            return leaf()
        i = rng.randint(1, n - 1)
        op = rng.choice((t.conj, t.disj, t.implication))
        return op(go(i), go(n - i))

    return go(k)
