import pytest

from mindag.formulas import atom, imp, parse_formula
from mindag.ndtree import (
    ImpElim,
    ImpIntro,
    Repeat,
    TreeDeduction,
    TreeError,
    TreeNode,
    assumption,
    check_tree,
    elim,
    eliminate_repetitions,
    has_weak_subformula_property,
    intro,
    is_locally_correct,
    is_normal,
    level_tree,
    open_leaves,
    proves_tree,
    repeat,
    tree_metrics,
    uses_repetition,
)


def identity_tree():
    p = atom("p")
    return TreeDeduction(intro(p, assumption(p)))


def test_identity_tree_golden_figures():
    d = identity_tree()
    assert len(d) == 2
    assert d.height == 1
    assert d.weight == 5       # 3 + 1 labels, one edge
    assert d.phi == 4          # p->p and p, counted once each
    assert is_locally_correct(d)
    # the root introduction itself closes the assumption path
    assert proves_tree(d)
    assert open_leaves(d) == []


def test_metrics_bundle():
    m = tree_metrics(identity_tree())
    assert (m.h, m.phi, m.w) == (1, 4, 5)
    assert m.normal and m.weak_subformula


def test_builders_reject_malformed_inferences():
    p, q = atom("p"), atom("q")
    with pytest.raises(TreeError):
        elim(assumption(p), assumption(q))          # major not an implication
    with pytest.raises(TreeError):
        elim(assumption(q), assumption(imp(p, q)))  # minor mismatch
    with pytest.raises(TreeError):
        repeat([])
    with pytest.raises(TreeError):
        repeat([assumption(p), assumption(q)])


def test_check_tree_flags_wrong_elimination_conclusion():
    p, q, r = atom("p"), atom("q"), atom("r")
    bad = TreeNode(r, ImpElim(), (assumption(p), assumption(imp(p, q))))
    report = check_tree(TreeDeduction(bad))
    assert not report.locally_correct
    assert any("node 0" in v and "differs" in v for v in report.violations)


def test_check_tree_flags_wrong_introduction_label():
    p, q = atom("p"), atom("q")
    bad = TreeNode(imp(p, q), ImpIntro(q), (assumption(q),))
    report = check_tree(TreeDeduction(bad))
    assert not report.locally_correct
    assert len(report.violations) == 1


def test_check_tree_flags_assumption_with_premises():
    p = atom("p")
    bad = TreeNode(p, type(assumption(p).rule)(), (assumption(p),))
    report = check_tree(TreeDeduction(bad))
    assert any("has premises" in v for v in report.violations)


def test_check_tree_flags_mismatched_repetition():
    p, q = atom("p"), atom("q")
    bad = TreeNode(p, Repeat(), (assumption(p), assumption(q)))
    report = check_tree(TreeDeduction(bad))
    assert any("repetition premise" in v for v in report.violations)


def test_open_and_closed_paths():
    p, q = atom("p"), atom("q")
    lone = TreeDeduction(assumption(p))
    assert not proves_tree(lone)
    assert [n.label for n in open_leaves(lone)] == [p]

    half = TreeDeduction(intro(q, assumption(p)))   # q->p, p never discharged
    assert is_locally_correct(half)
    assert not proves_tree(half)

    k = TreeDeduction(intro(p, intro(q, assumption(p))))
    assert proves_tree(k)                           # vacuous discharge of q is fine
    assert is_locally_correct(k)
    assert k.root.label is parse_formula("p->q->p")


def _chain_example():
    # r sits one level closer to the root than p and p->q do
    p, q, r = atom("p"), atom("q"), atom("r")
    left = elim(assumption(p), assumption(imp(p, q)))
    return TreeDeduction(elim(left, assumption(imp(q, r))))


def test_level_tree_pads_short_branches():
    d = _chain_example()
    assert not d.is_leveled()
    lv = level_tree(d)
    assert lv.is_leveled()
    assert lv.height == d.height
    assert lv.root.label is d.root.label
    assert is_locally_correct(lv)
    assert uses_repetition(lv)
    assert len(lv) == len(d) + 1                    # exactly one padding node
    assert proves_tree(lv) == proves_tree(d)


def test_level_tree_is_identity_on_leveled_input():
    d = identity_tree()
    assert level_tree(d).root is d.root


def test_eliminate_repetitions_yields_plain_proof():
    p = atom("p")
    rep = repeat([assumption(p), assumption(p)])
    d = TreeDeduction(intro(p, rep))
    out = eliminate_repetitions(d)
    assert not uses_repetition(out)
    assert out.root.label is d.root.label
    assert proves_tree(out)
    assert len(out) == 2


def test_eliminate_repetitions_skips_unclosed_branches():
    p, r = atom("p"), atom("r")
    detour = elim(assumption(r), assumption(imp(r, p)))  # open branch labeled p
    d = TreeDeduction(intro(p, repeat([detour, assumption(p)])))
    out = eliminate_repetitions(d)
    assert not uses_repetition(out)
    assert proves_tree(out)
    assert len(out) == 2                                 # detour dropped


def test_eliminate_repetitions_rejects_unprovable_input():
    p = atom("p")
    d = TreeDeduction(repeat([assumption(p), assumption(p)]))
    with pytest.raises(TreeError, match="no justified branch"):
        eliminate_repetitions(d)


def test_normality_detects_detours():
    p, q = atom("p"), atom("q")
    assert is_normal(identity_tree())
    detour = elim(assumption(p), intro(p, assumption(q)))
    d = TreeDeduction(detour)
    assert is_locally_correct(d)
    assert not is_normal(d)
    assert not has_weak_subformula_property(d)


def test_weak_subformula_allows_discharged_material():
    # ((p->q)->p) -> ((p->q) -> q): every label is a subformula of the
    # conclusion even though the paths pass through larger assumptions.
    p, q = atom("p"), atom("q")
    pq = imp(p, q)
    body = elim(elim(assumption(pq), assumption(imp(pq, p))), assumption(pq))
    d = TreeDeduction(intro(imp(pq, p), intro(pq, body)))
    assert proves_tree(d)
    assert has_weak_subformula_property(d)


def test_preorder_ids_are_stable():
    d = _chain_example()
    labels = [str(n.label) for n in d.nodes]
    assert labels[0] == "r"
    assert labels == [str(n.label) for n in d.nodes]
