import json

import pytest

from mindag.formulas import atom, imp, parse_sequent
from mindag.lm import check_lm, prove_lm
from mindag.nddag import (
    DagDeduction,
    DagNode,
    MergedRule,
    Repeat,
    TwinPair,
    tree_to_dag,
    verify_dag_stats,
)
from mindag.ndtree import (
    Assumption,
    ImpElim,
    TreeDeduction,
    assumption,
    elim,
    intro,
    level_tree,
    proves_tree,
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


def identity_tree():
    p = atom("p")
    return TreeDeduction(intro(p, assumption(p)))


def small_merged_dag():
    p, q, r, s = atom("p"), atom("q"), atom("r"), atom("s")
    nodes = [
        DagNode(0, s, 0, ImpElim(), (1, 2)),
        DagNode(1, q, 1, MergedRule((TwinPair(3, 4), TwinPair(5, 6))),
                (3, 4, 5, 6)),
        DagNode(2, imp(q, s), 1, Repeat(), (7,)),
        DagNode(3, p, 2, Assumption()),
        DagNode(4, imp(p, q), 2, Assumption()),
        DagNode(5, r, 2, Assumption()),
        DagNode(6, imp(r, q), 2, Assumption()),
        DagNode(7, imp(q, s), 2, Assumption()),
    ]
    e10 = (1, 0)
    selector = {
        (e10, p): frozenset({(3, 1)}),
        (e10, imp(p, q)): frozenset({(4, 1)}),
        (e10, r): frozenset({(5, 1)}),
        (e10, imp(r, q)): frozenset({(6, 1)}),
    }
    return DagDeduction(nodes, root=0, selector=selector)


def test_tree_json_schema_shape():
    doc = json.loads(tree_to_json(identity_tree()))
    assert set(doc) == {"nodes", "root"}
    assert doc["root"] == 0
    assert doc["nodes"][0] == {
        "id": 0,
        "label": "p->p",
        "rule": {"tag": "imp_intro", "discharge": "p"},
        "premises": [1],
    }
    assert doc["nodes"][1]["rule"] == {"tag": "assumption"}


def test_tree_round_trip():
    for tree in [identity_tree(),
                 TreeDeduction(intro(atom("p"),
                                     intro(atom("q"), assumption(atom("p"))))),
                 TreeDeduction(elim(assumption(atom("p")),
                                    assumption(imp(atom("p"), atom("q")))))]:
        back = tree_from_json(tree_to_json(tree))
        assert len(back) == len(tree)
        assert back.root.label is tree.root.label
        assert proves_tree(back) == proves_tree(tree)
        assert [type(n.rule) for n in back.nodes] \
            == [type(n.rule) for n in tree.nodes]


def test_tree_from_json_rejects_broken_documents():
    with pytest.raises(SerializeError, match="not a tree"):
        tree_from_json("{nope")
    with pytest.raises(SerializeError, match="not a tree"):
        tree_from_json('{"root": 0}')

    cyclic = json.dumps({"nodes": [
        {"id": 0, "label": "p", "rule": {"tag": "rep"}, "premises": [0]},
    ], "root": 0})
    with pytest.raises(SerializeError, match="ancestor"):
        tree_from_json(cyclic)

    shared = json.dumps({"nodes": [
        {"id": 0, "label": "p", "rule": {"tag": "rep"}, "premises": [1, 1]},
        {"id": 1, "label": "p", "rule": {"tag": "assumption"},
         "premises": []},
    ], "root": 0})
    with pytest.raises(SerializeError, match="used twice"):
        tree_from_json(shared)

    dangling = json.dumps({"nodes": [
        {"id": 0, "label": "p", "rule": {"tag": "rep"}, "premises": [7]},
    ], "root": 0})
    with pytest.raises(SerializeError, match="missing node 7"):
        tree_from_json(dangling)

    with pytest.raises(SerializeError, match="rule tag"):
        tree_from_json(json.dumps({"nodes": [
            {"id": 0, "label": "p", "rule": {"tag": "zap"}, "premises": []},
        ], "root": 0}))


def test_tree_dot_golden():
    assert tree_to_dot(identity_tree()) == (
        'digraph deduction {\n'
        '  rankdir=BT;\n'
        '  node [shape=box, fontname="monospace"];\n'
        '  n0 [label="p->p\\nimp_intro [p]"];\n'
        '  n1 [label="p\\nassumption"];\n'
        '  n1 -> n0;\n'
        '}\n'
    )


def test_dag_json_schema_shape():
    doc = json.loads(dag_to_json(small_merged_dag()))
    assert set(doc) == {"nodes", "edges", "root", "f_map"}
    merged = doc["nodes"][1]
    assert merged["rule"] == {"tag": "merged"}
    assert merged["groups"] == [
        {"kind": "twin", "minor": 3, "major": 4},
        {"kind": "twin", "minor": 5, "major": 6},
    ]
    assert "premises" not in merged
    plain = doc["nodes"][0]
    assert plain["premises"] == [1, 2]
    assert all(len(e) == 2 for e in doc["edges"])
    entry = doc["f_map"][0]
    assert set(entry) == {"edge", "assumption", "selected"}


def test_dag_round_trip_preserves_everything():
    d = small_merged_dag()
    back = dag_from_json(dag_to_json(d))
    assert set(back.nodes) == set(d.nodes)
    for i in d.nodes:
        assert back.nodes[i].label is d.nodes[i].label
        assert back.nodes[i].level == d.nodes[i].level
        assert back.nodes[i].premises == d.nodes[i].premises
    assert back.nodes[1].rule.groups == d.nodes[1].rule.groups
    assert back.selector == d.selector
    ours, theirs = verify_dag_stats(d), verify_dag_stats(back)
    assert (ours.ok, ours.af_correct) == (theirs.ok, theirs.af_correct)
    assert ours.root_assumptions == theirs.root_assumptions


def test_dag_round_trip_on_an_embedded_tree():
    d = tree_to_dag(level_tree(identity_tree()))
    back = dag_from_json(dag_to_json(d))
    assert verify_dag_stats(back).ok


def test_dag_from_json_validates_the_edge_list():
    doc = json.loads(dag_to_json(small_merged_dag()))
    doc["edges"] = doc["edges"][:-1]
    with pytest.raises(SerializeError, match="disagrees"):
        dag_from_json(json.dumps(doc))

    with pytest.raises(SerializeError, match="not a dag"):
        dag_from_json('{"nodes": []}')

    doc2 = json.loads(dag_to_json(small_merged_dag()))
    del doc2["nodes"][0]["label"]
    with pytest.raises(SerializeError, match="bad node entry"):
        dag_from_json(json.dumps(doc2))


def test_dag_dot_is_deterministic_and_annotated():
    d = small_merged_dag()
    dot = dag_to_dot(d)
    assert dot == dag_to_dot(small_merged_dag())
    # one rank block per level
    assert dot.count("rank=same") == 3
    assert "{ rank=same; n3; n4; n5; n6; n7; }" in dot
    # group labels on merged-node member edges
    assert 'n3 -> n1 [label="g0", penwidth=2, color="steelblue"];' in dot
    assert 'label="g1"' in dot
    # the unselected repeat edge stays plain
    assert "  n7 -> n2;" in dot


def test_plain_dag_dot_has_no_highlighting():
    dot = dag_to_dot(tree_to_dag(level_tree(identity_tree())))
    assert "steelblue" not in dot
    assert "merged" not in dot


def test_lm_round_trip_with_witnesses():
    res = prove_lm(parse_sequent("=> (p->q->r)->(p->q)->p->r"))
    text = lm_to_json(res.proof)
    doc = json.loads(text)
    assert doc["root"] == 0
    assert {"id", "sequent", "rule", "witnesses", "premises"} \
        == set(doc["nodes"][0])
    back = lm_from_json(text)
    assert check_lm(back).ok
    assert str(back.root.sequent) == str(res.proof.root.sequent)
    rules = {n.rule for n in back.nodes}
    assert "MEP" in rules
    mep = next(n for n in back.nodes if n.rule == "MEP")
    assert mep.witness("minor") is not None
    assert mep.witness("principal") is not None


def test_lm_from_json_rejects_bad_references():
    bad = json.dumps({"nodes": [
        {"id": 0, "sequent": "=> p->p", "rule": "MI1",
         "witnesses": {}, "premises": [0]},
    ], "root": 0})
    with pytest.raises(SerializeError, match="bad premise"):
        lm_from_json(bad)
    with pytest.raises(SerializeError, match="not a sequent-proof"):
        lm_from_json("[]")
