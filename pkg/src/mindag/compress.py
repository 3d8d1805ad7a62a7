"""Horizontal compression of leveled tree deductions into dags.

Compression merges, level by level, all tree nodes carrying the same
formula into a single dag node.  The inferences that used to conclude at
the merged positions survive as premise groups; a single surviving group
keeps its plain rule, several become a ``MergedRule``.  The family of
all leaf-to-root tree paths, pushed through the merge map, yields the
path family the later stages work with: a subfamily closed under sibling
completion (``build_fsp``) determines the premise selector
(``extract_f``), and restricting the dag to that subfamily's edges
produces the deduction that is finally verified.

One configuration is ruled out upfront: a merged node whose introduction
group's body node doubles as a twin pair's minor premise would make the
discharge bookkeeping ambiguous.  When merging would produce that shape,
the offending introduction inferences are first pushed one level up
behind a unary repetition and the tree is re-leveled, which keeps the
conclusion and provability intact.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional

from mindag.formulas import Formula
from mindag.ndtree import (
    Assumption,
    ImpElim,
    ImpIntro,
    Repeat,
    TreeDeduction,
    TreeNode,
    _rebuild,
    level_tree,
    proves_tree,
)
from mindag.nddag import (
    DagDeduction,
    DagNode,
    Edge,
    Group,
    IntroPremise,
    MergedRule,
    RepeatPremise,
    Selector,
    TwinPair,
    check_dag,
    dag_path_closed,
    merged_premises,
    verify_dag_stats,
)


class CompressError(ValueError):
    """Compression received unusable input or hit an internal defect."""


@dataclass(frozen=True)
class PathFamily:
    """Leaf-to-root dag node sequences, deduplicated, in discovery order."""
    paths: tuple[tuple[int, ...], ...]

    def __len__(self) -> int:
        return len(self.paths)

    def __iter__(self):
        return iter(self.paths)


@dataclass
class CompressResult:
    dag: DagDeduction
    merge_map: dict[int, int]
    paths: PathFamily
    tree: TreeDeduction


# --- collision avoidance ------------------------------------------------------


def _collision_bucket(ded: TreeDeduction) -> Optional[tuple[int, Formula]]:
    """First (level, label) whose merge would mix an introduction body
    with a twin minor, lowest level and smallest label first."""
    depths = ded.depths
    buckets: dict[tuple[int, int], list[TreeNode]] = {}
    labels: dict[tuple[int, int], Formula] = {}
    for n in ded.nodes:
        key = (depths[id(n)], n.label.id)
        buckets.setdefault(key, []).append(n)
        labels[key] = n.label
    for key in sorted(buckets):
        lab = labels[key]
        if not lab.is_implication:
            continue
        members = buckets[key]
        if not any(isinstance(m.rule, ImpIntro) for m in members):
            continue
        for m in members:
            if isinstance(m.rule, ImpElim) \
                    and m.premises[0].label is lab.rhs:
                return (key[0], lab)
    return None


def _push_intros(ded: TreeDeduction, level: int, label: Formula) -> TreeDeduction:
    """Move every introduction of ``label`` at ``level`` one level up
    behind a fresh unary repetition, then re-level."""
    depths = ded.depths

    def make(node: TreeNode, prems: tuple[TreeNode, ...]) -> TreeNode:
        fixed = []
        for p in prems:
            if isinstance(p.rule, ImpIntro) and p.label is label \
                    and depths.get(id(p)) == level:
                fixed.append(TreeNode(label, Repeat(), (p,)))
            else:
                fixed.append(p)
        if all(a is b for a, b in zip(fixed, node.premises)) \
                and len(fixed) == len(node.premises):
            return node
        return TreeNode(node.label, node.rule, tuple(fixed))

    return level_tree(TreeDeduction(_rebuild(ded.root, make)))


def avoid_collisions(ded: TreeDeduction) -> TreeDeduction:
    """Re-shape a leveled tree until no merge would be ambiguous."""
    rounds = 2 * (ded.height + len(ded)) + 4
    for _ in range(rounds):
        found = _collision_bucket(ded)
        if found is None:
            return ded
        ded = _push_intros(ded, *found)
    raise CompressError("collision avoidance did not converge")


# --- merging -------------------------------------------------------------------


def compress(ded: TreeDeduction) -> CompressResult:
    """Merge same-label nodes per level of a leveled proving tree.

    Returns the merged dag (selector still empty), the map from tree
    preorder indices to dag node ids, and the image of all tree paths.
    """
    if len(ded) < 2:
        raise CompressError("nothing to compress in a single-node tree")
    if not ded.is_leveled():
        raise CompressError("input tree is not leveled")
    if not isinstance(ded.root.rule, (ImpIntro, ImpElim)):
        raise CompressError("the conclusion must come from an introduction "
                            "or an elimination")
    if not proves_tree(ded):
        raise CompressError("input tree does not prove its conclusion")

    ded = avoid_collisions(ded)
    depths = ded.depths

    # one dag id per (level, label), levels outward, labels by identity id
    keys = sorted({(depths[id(n)], n.label.id) for n in ded.nodes})
    dag_id = {key: i for i, key in enumerate(keys)}

    def nid(t: TreeNode) -> int:
        return dag_id[(depths[id(t)], t.label.id)]

    merge_map = {i: nid(t) for i, t in enumerate(ded.nodes)}

    by_dag: dict[int, list[TreeNode]] = {}
    for t in ded.nodes:
        by_dag.setdefault(nid(t), []).append(t)

    nodes: list[DagNode] = []
    for key in keys:
        i = dag_id[key]
        members = by_dag[i]
        sample = members[0]
        level = key[0]
        if all(isinstance(m.rule, Assumption) for m in members):
            nodes.append(DagNode(i, sample.label, level, Assumption()))
            continue
        groups: list[Group] = []
        for m in members:
            for g in _origin_groups(m, nid):
                if g not in groups:
                    groups.append(g)
        if len(groups) == 1:
            g = groups[0]
            if isinstance(g, TwinPair):
                rule, prems = ImpElim(), (g.minor, g.major)
            elif isinstance(g, IntroPremise):
                rule, prems = ImpIntro(sample.label.lhs), (g.body,)
            else:
                rule, prems = Repeat(), (g.body,)
            nodes.append(DagNode(i, sample.label, level, rule, prems))
        else:
            nodes.append(DagNode(i, sample.label, level,
                                 MergedRule(tuple(groups)),
                                 merged_premises(groups)))

    dag = DagDeduction(nodes, dag_id[(0, ded.root.label.id)], {})
    paths = _image_paths(ded, nid)
    return CompressResult(dag, merge_map, paths, ded)


def _origin_groups(t: TreeNode, nid) -> list[Group]:
    if isinstance(t.rule, ImpIntro):
        return [IntroPremise(nid(t.premises[0]))]
    if isinstance(t.rule, ImpElim):
        return [TwinPair(nid(t.premises[0]), nid(t.premises[1]))]
    if isinstance(t.rule, Repeat):
        return [RepeatPremise(nid(p)) for p in t.premises]
    raise CompressError(f"cannot merge rule {t.rule!r}")


def _image_paths(ded: TreeDeduction, nid) -> PathFamily:
    seen: set[tuple[int, ...]] = set()
    order: list[tuple[int, ...]] = []
    stack: list[tuple[TreeNode, tuple[int, ...]]] = [(ded.root, ())]
    while stack:
        node, below = stack.pop()
        here = (nid(node),) + below
        if node.premises:
            stack.extend((p, here) for p in reversed(node.premises))
        else:
            if here not in seen:
                seen.add(here)
                order.append(here)
    return PathFamily(tuple(order))


# --- path-family conditions -----------------------------------------------------


@dataclass(frozen=True)
class CoherencyReport:
    ok: bool
    violations: tuple[str, ...]


def _twin_siblings(d: DagDeduction, entry: Edge) -> list[int]:
    """Partner premise ids owed for entering through ``entry``."""
    src, dst = entry
    rule = d.nodes[dst].rule
    if isinstance(rule, ImpElim):
        minor, major = d.nodes[dst].premises
        if src == minor:
            return [major]
        if src == major:
            return [minor]
        return []
    sibs = []
    if isinstance(rule, MergedRule):
        for g in rule.groups:
            if isinstance(g, TwinPair):
                if src == g.minor:
                    sibs.append(g.major)
                elif src == g.major:
                    sibs.append(g.minor)
    return sibs


def check_coherency(d: DagDeduction, family: PathFamily) -> CoherencyReport:
    """Density, closure, and sibling completion of a path family.

    (1) every dag edge lies on some family path; (2) every path is
    closed; (3) whenever a path enters an elimination — plain or a twin
    group of a merged node — through one premise, some family path covers
    the partner premise and agrees with it from the entered node down.
    """
    bad: list[str] = []
    edges = set(d.edges)
    covered: set[Edge] = set()
    h = d.height
    for k, path in enumerate(family):
        pairs = list(zip(path, path[1:]))
        if any(e not in edges for e in pairs) or len(path) != h + 1 \
                or path[-1] != d.root \
                or not isinstance(d.nodes[path[0]].rule, Assumption):
            bad.append(f"path {k} is not a leaf-to-root chain: {path}")
            continue
        covered.update(pairs)
        if not dag_path_closed(d, path, d.nodes[path[0]].label):
            bad.append(f"path {k} is open: {path}")
    for e in sorted(edges - covered):
        bad.append(f"edge {e} is on no path")

    tails: set[tuple[int, ...]] = set()
    for path in family:
        for i in range(len(path)):
            tails.add(path[i:])
    for k, path in enumerate(family):
        for i in range(len(path) - 1):
            for partner in _twin_siblings(d, (path[i], path[i + 1])):
                if (partner,) + path[i + 1:] not in tails:
                    bad.append(f"path {k} lacks a partner through node "
                               f"{partner} agreeing below position {i}")
    return CoherencyReport(not bad, tuple(bad))


def build_fsp(d: DagDeduction, family: PathFamily) -> PathFamily:
    """Select a sibling-complete subfamily.

    Starts from the first family path through each root premise and,
    scanning positions from the root upward, adds for every elimination
    entry the first family path that covers the partner premise with an
    identical tail.  First-found paths keep the family's enumeration
    order throughout.
    """
    by_tail: dict[tuple[int, ...], tuple[int, ...]] = {}
    for path in family:
        for i in range(len(path)):
            by_tail.setdefault(path[i:], path)

    chosen: list[tuple[int, ...]] = []
    have: set[tuple[int, ...]] = set()

    def add(path: tuple[int, ...]) -> None:
        if path not in have:
            have.add(path)
            chosen.append(path)

    for prem in d.nodes[d.root].premises:
        start = next((p for p in family if p[-2] == prem), None)
        if start is None:
            raise CompressError(f"no family path through root premise {prem}")
        add(start)

    h = d.height
    for i in range(h - 1, -1, -1):
        grew = True
        while grew:
            grew = False
            for path in list(chosen):
                for partner in _twin_siblings(d, (path[i], path[i + 1])):
                    needed = (partner,) + path[i + 1:]
                    if any(p[i:] == needed for p in chosen):
                        continue
                    witness = by_tail.get(needed)
                    if witness is None:
                        raise CompressError(
                            f"family lacks a partner path through node "
                            f"{partner} below position {i}")
                    add(witness)
                    grew = True
    return PathFamily(tuple(chosen))


# --- selector extraction and restriction ------------------------------------------


def extract_f(d: DagDeduction, family: PathFamily) -> Selector:
    """Read the premise selector off a path family.

    For every family path with leaf label ``a`` running through edges
    ``e'`` then ``e`` around a merged node, the entry ``(e, a)`` gains
    ``e'``.
    """
    routes: dict[tuple[Edge, Formula], set] = {}
    for path in family:
        alpha = d.nodes[path[0]].label
        for i in range(len(path) - 2):
            mid = path[i + 1]
            if isinstance(d.nodes[mid].rule, MergedRule):
                key = ((mid, path[i + 2]), alpha)
                routes.setdefault(key, set()).add((path[i], mid))
    return {key: frozenset(val) for key, val in routes.items()}


def restrict_to_fsp(d: DagDeduction, family: PathFamily,
                    selector: Selector) -> DagDeduction:
    """Drop every node and edge not used by the family.

    Merged groups survive only when all their member edges survive; a
    partially surviving group means the family was not sibling-complete.
    Merged nodes left with a single group degrade to the plain rule.
    """
    used_edges: set[Edge] = set()
    used_nodes: set[int] = set()
    for path in family:
        used_nodes.update(path)
        used_edges.update(zip(path, path[1:]))

    nodes: list[DagNode] = []
    for i in sorted(used_nodes):
        n = d.nodes[i]
        if isinstance(n.rule, MergedRule):
            kept: list[Group] = []
            for g in n.rule.groups:
                present = [(m, i) in used_edges for m in g.members()]
                if all(present):
                    kept.append(g)
                elif any(present):
                    raise CompressError(
                        f"group {g} of node {i} survives only partially")
            if not kept:
                raise CompressError(f"no group of node {i} survives")
            if len(kept) == 1:
                g = kept[0]
                if isinstance(g, TwinPair):
                    rule, prems = ImpElim(), (g.minor, g.major)
                elif isinstance(g, IntroPremise):
                    rule, prems = ImpIntro(n.label.lhs), (g.body,)
                else:
                    rule, prems = Repeat(), (g.body,)
                nodes.append(DagNode(i, n.label, n.level, rule, prems))
            else:
                nodes.append(DagNode(i, n.label, n.level,
                                     MergedRule(tuple(kept)),
                                     merged_premises(kept)))
        else:
            if not all((p, i) in used_edges for p in n.premises):
                raise CompressError(
                    f"plain node {i} loses premises under the family")
            nodes.append(n)

    merged_ids = {n.id for n in nodes if isinstance(n.rule, MergedRule)}
    kept_selector = {key: val for key, val in selector.items()
                     if key[0][0] in merged_ids}
    return DagDeduction(nodes, d.root, kept_selector)


# --- the full pipeline --------------------------------------------------------------


@dataclass
class CertifyResult:
    dag: DagDeduction
    metrics: dict
    verified: bool


def compress_and_certify(ded: TreeDeduction) -> CertifyResult:
    """Level, merge, select, restrict, and verify in one sweep.

    The metrics compare the input tree (leveled) with the restricted
    dag: heights, weights, the summed weight of distinct labels, whether
    the height and weight bounds hold, and the size of the selected path
    family.
    """
    leveled = level_tree(ded)
    res = compress(leveled)
    coh = check_coherency(res.dag, res.paths)
    if not coh.ok:
        raise CompressError("path family is incoherent: "
                            + "; ".join(coh.violations[:3]))
    fsp = build_fsp(res.dag, res.paths)
    selector = extract_f(res.dag, fsp)
    final = restrict_to_fsp(res.dag, fsp, selector)
    shape = check_dag(final)
    outcome = verify_dag_stats(final)
    h_tree = leveled.height
    phi = leveled.phi
    metrics = {
        "h_tree": h_tree,
        "h_dag": final.height,
        "phi": phi,
        "w_tree": leveled.weight,
        "w_dag": final.weight,
        "bound_ok": final.height <= 2 * h_tree
        and final.weight <= final.height * phi * phi,
        "fsp_size": len(fsp),
        "checker_steps": outcome.steps,
    }
    return CertifyResult(final, metrics, shape.ok and outcome.ok)
