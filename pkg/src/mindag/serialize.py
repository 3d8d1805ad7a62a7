"""JSON and DOT views of deduction trees, dags, and sequent proofs.

Formulas travel as their text form and are re-interned on load, so a
round trip preserves labels up to formatting.  Tree and dag nodes are
numbered in preorder / by their dag ids; DOT output groups dag nodes one
rank per level and highlights the edges the premise selector uses.
"""

from __future__ import annotations

import json
from typing import Optional

from mindag.formulas import (
    TABLE,
    Formula,
    FormulaTable,
    Sequent,
    format_formula,
    parse_formula,
    parse_sequent,
)
from mindag.ndtree import (
    Assumption,
    ImpElim,
    ImpIntro,
    Repeat,
    TreeDeduction,
    TreeNode,
)
from mindag.nddag import (
    DagDeduction,
    DagNode,
    Group,
    IntroPremise,
    MergedRule,
    RepeatPremise,
    TwinPair,
    merged_premises,
)
from mindag.lm import LmNode, LmProof


class SerializeError(ValueError):
    """Input that does not decode into the expected shape."""


# --- trees -----------------------------------------------------------------


def _rule_to_json(rule) -> dict:
    if isinstance(rule, Assumption):
        return {"tag": "assumption"}
    if isinstance(rule, ImpIntro):
        return {"tag": "imp_intro", "discharge": format_formula(rule.discharge)}
    if isinstance(rule, ImpElim):
        return {"tag": "imp_elim"}
    if isinstance(rule, Repeat):
        return {"tag": "rep"}
    raise SerializeError(f"unknown rule {rule!r}")


def _rule_from_json(obj: dict, table: FormulaTable):
    tag = obj.get("tag")
    if tag == "assumption":
        return Assumption()
    if tag == "imp_intro":
        return ImpIntro(parse_formula(obj["discharge"], table))
    if tag == "imp_elim":
        return ImpElim()
    if tag == "rep":
        return Repeat()
    raise SerializeError(f"unknown rule tag {tag!r}")


def tree_to_json(ded: TreeDeduction) -> str:
    ids = {id(n): i for i, n in enumerate(ded.nodes)}
    nodes = []
    for i, n in enumerate(ded.nodes):
        nodes.append({
            "id": i,
            "label": format_formula(n.label),
            "rule": _rule_to_json(n.rule),
            "premises": [ids[id(p)] for p in n.premises],
        })
    return json.dumps({"nodes": nodes, "root": 0}, indent=2)


def tree_from_json(text: str,
                   table: Optional[FormulaTable] = None) -> TreeDeduction:
    t = TABLE if table is None else table
    try:
        doc = json.loads(text)
        raw = {n["id"]: n for n in doc["nodes"]}
        root_id = doc["root"]
    except (json.JSONDecodeError, KeyError, TypeError) as exc:
        raise SerializeError(f"not a tree document: {exc}") from exc
    built: dict[int, TreeNode] = {}

    def build(i: int, trail: tuple) -> TreeNode:
        if i in trail:
            raise SerializeError(f"node {i} is its own ancestor")
        if i in built:
            raise SerializeError(f"node {i} used twice; not a tree")
        if i not in raw:
            raise SerializeError(f"missing node {i}")
        n = raw[i]
        prems = tuple(build(p, trail + (i,)) for p in n["premises"])
        node = TreeNode(parse_formula(n["label"], t),
                        _rule_from_json(n["rule"], t), prems)
        built[i] = node
        return node

    return TreeDeduction(build(root_id, ()))


def tree_to_dot(ded: TreeDeduction) -> str:
    ids = {id(n): i for i, n in enumerate(ded.nodes)}
    lines = ["digraph deduction {", "  rankdir=BT;",
             '  node [shape=box, fontname="monospace"];']
    for i, n in enumerate(ded.nodes):
        rule = _rule_to_json(n.rule)
        tag = rule["tag"]
        extra = f" [{rule['discharge']}]" if tag == "imp_intro" else ""
        lines.append(f'  n{i} [label="{_esc(format_formula(n.label))}'
                     f'\\n{tag}{_esc(extra)}"];')
    for i, n in enumerate(ded.nodes):
        for p in n.premises:
            lines.append(f"  n{ids[id(p)]} -> n{i};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def _esc(s: str) -> str:
    return s.replace("\\", "\\\\").replace('"', '\\"')


# --- dags ------------------------------------------------------------------


def _group_to_json(g: Group) -> dict:
    if isinstance(g, TwinPair):
        return {"kind": "twin", "minor": g.minor, "major": g.major}
    if isinstance(g, IntroPremise):
        return {"kind": "intro", "body": g.body}
    return {"kind": "rep", "body": g.body}


def _group_from_json(obj: dict) -> Group:
    kind = obj.get("kind")
    if kind == "twin":
        return TwinPair(obj["minor"], obj["major"])
    if kind == "intro":
        return IntroPremise(obj["body"])
    if kind == "rep":
        return RepeatPremise(obj["body"])
    raise SerializeError(f"unknown group kind {kind!r}")


def dag_to_json(d: DagDeduction) -> str:
    nodes = []
    for i in sorted(d.nodes):
        n = d.nodes[i]
        entry = {
            "id": n.id,
            "label": format_formula(n.label),
            "level": n.level,
        }
        if isinstance(n.rule, MergedRule):
            entry["rule"] = {"tag": "merged"}
            entry["groups"] = [_group_to_json(g) for g in n.rule.groups]
        else:
            entry["rule"] = _rule_to_json(n.rule)
            entry["premises"] = list(n.premises)
        nodes.append(entry)
    f_map = []
    for (edge, alpha), chosen in sorted(
            d.selector.items(),
            key=lambda kv: (kv[0][0], format_formula(kv[0][1]))):
        f_map.append({
            "edge": list(edge),
            "assumption": format_formula(alpha),
            "selected": sorted(list(e) for e in chosen),
        })
    return json.dumps({
        "nodes": nodes,
        "edges": [list(e) for e in d.edges],
        "root": d.root,
        "f_map": f_map,
    }, indent=2)


def dag_from_json(text: str,
                  table: Optional[FormulaTable] = None) -> DagDeduction:
    t = TABLE if table is None else table
    try:
        doc = json.loads(text)
        raw_nodes = doc["nodes"]
        root = doc["root"]
        f_map = doc.get("f_map", [])
        declared = {tuple(e) for e in doc.get("edges", [])}
    except (json.JSONDecodeError, KeyError, TypeError) as exc:
        raise SerializeError(f"not a dag document: {exc}") from exc
    nodes = []
    for n in raw_nodes:
        try:
            label = parse_formula(n["label"], t)
            if n["rule"].get("tag") == "merged":
                groups = tuple(_group_from_json(g) for g in n["groups"])
                node = DagNode(n["id"], label, n["level"],
                               MergedRule(groups), merged_premises(groups))
            else:
                node = DagNode(n["id"], label, n["level"],
                               _rule_from_json(n["rule"], t),
                               tuple(n.get("premises", ())))
        except (KeyError, TypeError) as exc:
            raise SerializeError(f"bad node entry {n!r}: {exc}") from exc
        nodes.append(node)
    selector = {}
    for entry in f_map:
        try:
            edge = tuple(entry["edge"])
            alpha = parse_formula(entry["assumption"], t)
            chosen = frozenset(tuple(e) for e in entry["selected"])
        except (KeyError, TypeError) as exc:
            raise SerializeError(f"bad selector entry {entry!r}: {exc}") \
                from exc
        selector[(edge, alpha)] = chosen
    d = DagDeduction(nodes, root, selector)
    if declared and declared != set(d.edges):
        raise SerializeError("edge list disagrees with node premises")
    return d


def dag_to_dot(d: DagDeduction) -> str:
    selected_edges = set()
    for chosen in d.selector.values():
        selected_edges.update(chosen)
    group_tags: dict[tuple, list[str]] = {}
    for i in sorted(d.nodes):
        rule = d.nodes[i].rule
        if isinstance(rule, MergedRule):
            for gi, g in enumerate(rule.groups):
                for m in g.members():
                    group_tags.setdefault((m, i), []).append(f"g{gi}")
    lines = ["digraph deduction {", "  rankdir=BT;",
             '  node [shape=box, fontname="monospace"];']
    by_level: dict[int, list[int]] = {}
    for i in sorted(d.nodes):
        by_level.setdefault(d.nodes[i].level, []).append(i)
    for level in sorted(by_level):
        ids = by_level[level]
        for i in ids:
            n = d.nodes[i]
            tag = ("merged" if isinstance(n.rule, MergedRule)
                   else _rule_to_json(n.rule)["tag"])
            lines.append(f'  n{i} [label="{_esc(format_formula(n.label))}'
                         f'\\n{tag} (L{n.level})"];')
        names = "; ".join(f"n{i}" for i in ids)
        lines.append(f"  {{ rank=same; {names}; }}")
    for (s, t_) in d.edges:
        attrs = []
        if (s, t_) in group_tags:
            attrs.append(f'label="{",".join(group_tags[(s, t_)])}"')
        if (s, t_) in selected_edges:
            attrs.append('penwidth=2')
            attrs.append('color="steelblue"')
        suffix = f" [{', '.join(attrs)}]" if attrs else ""
        lines.append(f"  n{s} -> n{t_}{suffix};")
    lines.append("}")
    return "\n".join(lines) + "\n"


# --- sequent proofs -----------------------------------------------------------


def lm_to_json(proof: LmProof) -> str:
    order = proof.nodes
    ids = {id(n): i for i, n in enumerate(order)}
    nodes = []
    for i, n in enumerate(order):
        nodes.append({
            "id": i,
            "sequent": str(n.sequent),
            "rule": n.rule,
            "witnesses": {k: format_formula(v) for k, v in n.witnesses},
            "premises": [ids[id(p)] for p in n.premises],
        })
    return json.dumps({"nodes": nodes, "root": 0}, indent=2)


def lm_from_json(text: str,
                 table: Optional[FormulaTable] = None) -> LmProof:
    t = TABLE if table is None else table
    try:
        doc = json.loads(text)
        raw = {n["id"]: n for n in doc["nodes"]}
        root_id = doc["root"]
    except (json.JSONDecodeError, KeyError, TypeError) as exc:
        raise SerializeError(f"not a sequent-proof document: {exc}") from exc

    def build(i: int, trail: tuple) -> LmNode:
        if i in trail or i not in raw:
            raise SerializeError(f"bad premise reference {i}")
        n = raw[i]
        prems = tuple(build(p, trail + (i,)) for p in n["premises"])
        witnesses = tuple(sorted(
            (k, parse_formula(v, t)) for k, v in n["witnesses"].items()))
        return LmNode(parse_sequent(n["sequent"], t), n["rule"],
                      witnesses, prems)

    return LmProof(build(root_id, ()))
