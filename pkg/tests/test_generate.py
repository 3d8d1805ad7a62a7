from mindag.formulas import FormulaTable, FullFormulaTable, Sequent
from mindag.generate import (
    CUBE_BOUND_FLOOR,
    dag_pool,
    merge_tree_full,
    mutate_selector,
    random_formula,
    random_full_formula,
    random_merged_tree,
    random_open_tree,
    random_provable_formulas,
    random_proving_tree,
)
from mindag.lm import prove_lm
from mindag.nddag import (
    MergedRule,
    check_af_correctness,
    check_dag,
    compute_af,
    verify_by_threads,
    verify_dag,
)
from mindag.ndtree import is_locally_correct, open_leaves, proves_tree


def test_generators_are_seed_deterministic():
    assert random_formula(3) is random_formula(3)
    a = random_proving_tree(5)
    b = random_proving_tree(5)
    assert a.root.label is b.root.label and len(a) == len(b)
    f1 = random_full_formula(9, table=FullFormulaTable())
    f2 = random_full_formula(9, table=FullFormulaTable())
    assert str(f1) == str(f2)


def test_random_formula_respects_the_weight_cap():
    for seed in range(25):
        assert random_formula(seed, max_weight=15).weight <= 15


def test_provable_formulas_really_prove():
    formulas = random_provable_formulas(2, count=6, max_weight=24)
    assert len(formulas) == len({f.id for f in formulas}) == 6
    for f in formulas:
        assert f.weight <= 24
        assert prove_lm(Sequent((), f)).proved


def test_proving_trees_prove_and_open_trees_check():
    for seed in range(8):
        assert proves_tree(random_proving_tree(seed))
        t = random_open_tree(seed)
        assert is_locally_correct(t)
    assert any(open_leaves(random_open_tree(s)) for s in range(8))


def test_merged_trees_close_and_merge():
    for seed in range(6):
        tree = random_merged_tree(seed, routes=2 + seed % 2)
        assert proves_tree(tree)
        d = merge_tree_full(tree)
        assert any(isinstance(n.rule, MergedRule) for n in d.nodes.values())
        assert d.selector
        assert verify_dag(d)


def test_open_merged_tree_keeps_assumptions():
    tree = random_merged_tree(4, close=False)
    assert is_locally_correct(tree)
    assert open_leaves(tree)


def test_mutate_selector_returns_checked_variants_only():
    found = None
    for seed in range(12):
        d = merge_tree_full(random_merged_tree(seed, routes=3))
        mutant = mutate_selector(seed, d)
        if mutant is not None:
            found = (d, mutant)
            break
    assert found is not None, "no admissible selector mutation in 12 tries"
    original, mutant = found
    assert mutant.selector != original.selector
    assert check_dag(mutant).ok
    assert check_af_correctness(mutant, compute_af(mutant))


def test_dag_pool_shape_and_guarantees():
    table = FormulaTable()
    pool = dag_pool(1, count=60, max_nodes=30, table=table)
    assert len(pool) == 60
    verdicts = set()
    merged_with_selector = 0
    for d in pool:
        assert len(d.nodes) <= 30
        assert check_dag(d).ok
        assert check_af_correctness(d, compute_af(d))
        v = verify_dag(d)
        assert v == verify_by_threads(d)
        verdicts.add(v)
        if any(isinstance(n.rule, MergedRule) for n in d.nodes.values()):
            assert d.selector
            merged_with_selector += 1
    assert verdicts == {True, False}
    assert merged_with_selector >= 5


def test_full_formula_sizes_stay_in_range():
    for seed in range(40):
        f = random_full_formula(seed, max_size=21, min_size=CUBE_BOUND_FLOOR,
                                table=FullFormulaTable())
        assert CUBE_BOUND_FLOOR <= f.weight <= 21
