"""Dag-shaped deductions with shared subconclusions and premise selectors.

A dag deduction is a leveled, rooted dag whose nodes carry formulas and
inference rules.  Levels count from the root (level 0) upward; every edge
spans exactly one level and all leaves sit on the top level.  A node may
feed several consumers.  Nodes that combine several inferences with the
same conclusion carry a ``MergedRule`` listing the originating premise
groups, and a partial *selector* ``f`` says, per outgoing edge and per
assumption, which ingoing edges that assumption may travel through.

Verification computes, bottom-up, the set of open assumptions ``A(e)``
carried by every edge ``e`` (plus a virtual edge below the root) and
declares the dag proving when the selector is well-formed for that table
and nothing reaches the root.  ``enumerate_f_threads`` provides the
path-by-path oracle used to cross-check the edge-set computation, and
``unfold_dag`` rebuilds an ordinary tree deduction from a verified dag.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional, Union

from mindag.formulas import Formula
from mindag.ndtree import (
    Assumption,
    ImpElim,
    ImpIntro,
    Repeat,
    Rule,
    TreeDeduction,
    TreeNode,
)

Edge = tuple[int, int]


class DagError(ValueError):
    """An ill-formed dag deduction or a failed dag operation."""


# --- merged-rule groups ----------------------------------------------------


@dataclass(frozen=True)
class TwinPair:
    """An elimination group: minor premise node and major premise node."""
    minor: int
    major: int

    def members(self) -> tuple[int, ...]:
        return (self.minor, self.major)


@dataclass(frozen=True)
class IntroPremise:
    """An introduction group: the single body the implication is drawn from."""
    body: int

    def members(self) -> tuple[int, ...]:
        return (self.body,)


@dataclass(frozen=True)
class RepeatPremise:
    """A repetition group: a premise that restates the conclusion."""
    body: int

    def members(self) -> tuple[int, ...]:
        return (self.body,)


Group = Union[TwinPair, IntroPremise, RepeatPremise]


@dataclass(frozen=True)
class MergedRule(Rule):
    groups: tuple[Group, ...]

    def __repr__(self) -> str:
        return f"MergedRule({len(self.groups)} groups)"


def merged_premises(groups: Iterable[Group]) -> tuple[int, ...]:
    """Distinct member node ids in group order, first occurrence kept."""
    seen: list[int] = []
    for g in groups:
        for m in g.members():
            if m not in seen:
                seen.append(m)
    return tuple(seen)


# --- the dag ----------------------------------------------------------------


@dataclass(frozen=True)
class DagNode:
    id: int
    label: Formula
    level: int
    rule: Rule
    premises: tuple[int, ...] = ()


Selector = dict[tuple[Edge, Formula], frozenset]


class DagDeduction:
    """A leveled dag of inferences plus the premise selector ``f``.

    ``selector`` maps ``((source, target), assumption)`` to a frozenset of
    ingoing edges of ``source``; it may only be populated on outgoing
    edges of merged nodes.  Edges are ``(premise_id, conclusion_id)``
    pairs pointing from the higher level to the lower.
    """

    def __init__(self, nodes: Iterable[DagNode], root: int,
                 selector: Optional[Selector] = None):
        self.nodes: dict[int, DagNode] = {}
        for n in nodes:
            if n.id in self.nodes:
                raise DagError(f"duplicate node id {n.id}")
            self.nodes[n.id] = n
        if root not in self.nodes:
            raise DagError(f"missing root node {root}")
        self.root = root
        self.selector: Selector = dict(selector or {})
        self._consumers: dict[int, list[int]] = {i: [] for i in self.nodes}
        for n in self.nodes.values():
            for p in n.premises:
                if p in self._consumers:
                    self._consumers[p].append(n.id)
        for lst in self._consumers.values():
            lst.sort()

    def __len__(self) -> int:
        return len(self.nodes)

    def node(self, nid: int) -> DagNode:
        return self.nodes[nid]

    def in_edges(self, nid: int) -> list[Edge]:
        return [(p, nid) for p in self.nodes[nid].premises]

    def out_edges(self, nid: int) -> list[Edge]:
        return [(nid, c) for c in self._consumers[nid]]

    @property
    def edges(self) -> list[Edge]:
        out = []
        for nid in sorted(self.nodes):
            out.extend(self.in_edges(nid))
        return out

    @property
    def leaves(self) -> list[DagNode]:
        return [n for i, n in sorted(self.nodes.items())
                if isinstance(n.rule, Assumption)]

    @property
    def height(self) -> int:
        return max(n.level for n in self.nodes.values())

    @property
    def weight(self) -> int:
        return sum(n.label.weight for n in self.nodes.values()) \
            + sum(len(n.premises) for n in self.nodes.values())

    @property
    def conclusion(self) -> Formula:
        return self.nodes[self.root].label

    def intro_premise_edge(self, nid: int) -> Optional[Edge]:
        """The body edge of the merged node's introduction group, if any."""
        rule = self.nodes[nid].rule
        if isinstance(rule, MergedRule):
            for g in rule.groups:
                if isinstance(g, IntroPremise):
                    return (g.body, nid)
        return None

    def selector_by_edge(self) -> dict[Edge, dict[Formula, frozenset]]:
        out: dict[Edge, dict[Formula, frozenset]] = {}
        for (edge, alpha), chosen in self.selector.items():
            out.setdefault(edge, {})[alpha] = chosen
        return out


# --- structural validation ---------------------------------------------------


@dataclass(frozen=True)
class DagReport:
    ok: bool
    violations: tuple[str, ...]


def check_dag(d: DagDeduction) -> DagReport:
    """Validate dag shape, leveling, rule schemas, groups, and selector."""
    bad: list[str] = []
    root = d.nodes[d.root]
    if root.level != 0:
        bad.append(f"root {d.root} has level {root.level}, expected 0")
    if not isinstance(root.rule, (ImpIntro, ImpElim)):
        bad.append(f"root {d.root} must conclude by introduction or "
                   f"elimination, got {type(root.rule).__name__}")

    for nid, n in sorted(d.nodes.items()):
        for p in n.premises:
            if p not in d.nodes:
                bad.append(f"node {nid}: unknown premise {p}")
            elif d.nodes[p].level != n.level + 1:
                bad.append(f"edge ({p},{nid}) spans levels "
                           f"{d.nodes[p].level}->{n.level}")
        rule = n.rule
        if isinstance(rule, Assumption):
            if n.premises:
                bad.append(f"node {nid}: assumption with premises")
        elif isinstance(rule, ImpIntro):
            if len(n.premises) != 1:
                bad.append(f"node {nid}: introduction needs one premise")
            else:
                body = d.nodes.get(n.premises[0])
                lab = n.label
                if body and (not lab.is_implication
                             or lab.lhs is not rule.discharge
                             or lab.rhs is not body.label):
                    bad.append(f"node {nid}: label {lab} is not "
                               f"({rule.discharge}) -> ({body.label})")
        elif isinstance(rule, ImpElim):
            if len(n.premises) != 2:
                bad.append(f"node {nid}: elimination needs two premises")
            else:
                minor = d.nodes.get(n.premises[0])
                major = d.nodes.get(n.premises[1])
                if minor and major:
                    big = major.label
                    if not big.is_implication or big.lhs is not minor.label \
                            or big.rhs is not n.label:
                        bad.append(f"node {nid}: premises {minor.label} / "
                                   f"{big} do not yield {n.label}")
        elif isinstance(rule, Repeat):
            if len(n.premises) != 1:
                bad.append(f"node {nid}: dag repetition must be unary")
            elif d.nodes.get(n.premises[0]) and \
                    d.nodes[n.premises[0]].label is not n.label:
                bad.append(f"node {nid}: repetition changes the label")
        elif isinstance(rule, MergedRule):
            bad.extend(f"node {nid}: {v}"
                       for v in _check_groups(d, n, rule.groups))
        else:
            bad.append(f"node {nid}: unknown rule {rule!r}")

    # reachability from the root
    seen = {d.root}
    stack = [d.root]
    while stack:
        cur = stack.pop()
        for p in d.nodes[cur].premises:
            if p in d.nodes and p not in seen:
                seen.add(p)
                stack.append(p)
    for nid in sorted(d.nodes):
        if nid not in seen:
            bad.append(f"node {nid}: unreachable from root")

    # all leaves on the single top level
    top = max((n.level for n in d.nodes.values()), default=0)
    for n in sorted(d.nodes.values(), key=lambda m: m.id):
        if isinstance(n.rule, Assumption) and n.level != top:
            bad.append(f"node {n.id}: leaf at level {n.level}, "
                       f"top level is {top}")
        if not isinstance(n.rule, Assumption) and not n.premises:
            bad.append(f"node {n.id}: interior node without premises")

    bad.extend(_check_selector(d))
    return DagReport(not bad, tuple(bad))


def _check_groups(d: DagDeduction, n: DagNode,
                  groups: tuple[Group, ...]) -> list[str]:
    bad: list[str] = []
    if len(groups) < 2:
        bad.append("merged rule needs at least two groups")
    if len(set(groups)) != len(groups):
        bad.append("duplicate merged groups")
    intro_bodies = []
    minors: list[int] = []
    others: set[int] = set()
    for g in groups:
        if any(m not in d.nodes for m in g.members()):
            bad.append(f"group {g} references unknown nodes")
            continue
        if isinstance(g, TwinPair):
            minor, major = d.nodes[g.minor], d.nodes[g.major]
            if not major.label.is_implication \
                    or major.label.lhs is not minor.label \
                    or major.label.rhs is not n.label:
                bad.append(f"twin {minor.label} / {major.label} does not "
                           f"yield {n.label}")
            minors.append(g.minor)
            others.add(g.minor)
            others.add(g.major)
        elif isinstance(g, IntroPremise):
            body = d.nodes[g.body]
            if not n.label.is_implication or n.label.rhs is not body.label:
                bad.append(f"introduction group body {body.label} does not "
                           f"fit {n.label}")
            intro_bodies.append(g.body)
        else:
            body = d.nodes[g.body]
            if body.label is not n.label:
                bad.append(f"repetition group changes the label to "
                           f"{body.label}")
            others.add(g.body)
    if len(intro_bodies) > 1:
        bad.append("more than one introduction group")
    if len(minors) != len({d.nodes[m].label for m in minors
                           if m in d.nodes}):
        bad.append("twin groups share a minor label")
    for b in intro_bodies:
        if b in others:
            bad.append(f"introduction body {b} also serves another group; "
                       f"the roles must stay disjoint")
    if n.premises != merged_premises(groups):
        bad.append("premise list disagrees with the groups")
    return bad


def _check_selector(d: DagDeduction) -> list[str]:
    bad: list[str] = []
    edge_set = set(d.edges)
    for (edge, alpha), chosen in d.selector.items():
        src, dst = edge
        if edge not in edge_set:
            bad.append(f"selector keyed on unknown edge {edge}")
            continue
        if not isinstance(d.nodes[src].rule, MergedRule):
            bad.append(f"selector defined on edge {edge} of a "
                       f"non-merged node")
            continue
        if not isinstance(alpha, Formula):
            bad.append(f"selector key on {edge} is not a formula")
            continue
        if not chosen:
            bad.append(f"selector entry on {edge} for {alpha} is empty")
        ins = set(d.in_edges(src))
        for e in chosen:
            if e not in ins:
                bad.append(f"selector on {edge} for {alpha} picks {e}, "
                           f"not an ingoing edge of node {src}")
    return bad


# --- assumption-set computation ----------------------------------------------


@dataclass
class AfTable:
    """Per-edge open-assumption sets plus the virtual root edge's set."""
    edges: dict[Edge, frozenset]
    root: frozenset
    steps: int


def compute_af(d: DagDeduction) -> AfTable:
    """Bottom-up per-edge assumption sets.

    Leaves contribute their own label.  Eliminations and repetitions pass
    the union of their ingoing sets; introductions subtract the
    discharged formula.  At a merged node, an assumption crosses to an
    outgoing edge only when the selector routes it there from an ingoing
    edge still carrying it; a contribution read off the introduction
    group's body edge drops the discharged antecedent first.  An outgoing
    edge of a merged node with no selector entries at all, while the
    ingoing edges still carry assumptions, is reported as incomplete.
    """
    order = sorted(d.nodes.values(), key=lambda n: (-n.level, n.id))
    table: dict[Edge, frozenset] = {}
    sel = d.selector_by_edge()
    steps = 0
    root_set: frozenset = frozenset()

    def at(e: Edge) -> frozenset:
        s = table.get(e)
        if s is None:
            raise DagError(f"edge {e} read before its source; "
                           f"levels are inconsistent")
        return s

    for n in order:
        if isinstance(n.rule, MergedRule):
            iprem = d.intro_premise_edge(n.id)
            discharge = n.label.lhs if iprem is not None else None

            def adjusted(e: Edge) -> frozenset:
                s = at(e)
                if e == iprem and discharge in s:
                    return s - {discharge}
                return s

            live = frozenset().union(
                *(adjusted(e) for e in d.in_edges(n.id)))
            steps += sum(len(at(e)) for e in d.in_edges(n.id))
            for edge in d.out_edges(n.id):
                entries = sel.get(edge, {})
                if not entries and live:
                    raise DagError(f"f incomplete at node {n.id}")
                carried = set()
                for alpha, chosen in entries.items():
                    steps += len(chosen)
                    if any(alpha in adjusted(e) for e in chosen):
                        carried.add(alpha)
                table[edge] = frozenset(carried)
            continue

        if isinstance(n.rule, Assumption):
            s = frozenset((n.label,))
        else:
            s = frozenset().union(*(at(e) for e in d.in_edges(n.id)))
            steps += sum(len(at(e)) for e in d.in_edges(n.id))
            if isinstance(n.rule, ImpIntro):
                s = s - {n.rule.discharge}
        steps += len(s)
        for edge in d.out_edges(n.id):
            table[edge] = s
        if n.id == d.root:
            root_set = s

    return AfTable(table, root_set, steps)


def check_af_correctness(d: DagDeduction, table: AfTable) -> bool:
    """Selection-correctness of ``f`` against a computed table.

    (a) at every merged node the selector entries, over all outgoing
    edges, cover the ingoing edges exactly; (b) every assumption carried
    by an outgoing edge has a selector entry there with a witness ingoing
    edge still carrying it.
    """
    return not af_correctness_violations(d, table)


def af_correctness_violations(d: DagDeduction, table: AfTable) -> list[str]:
    bad: list[str] = []
    sel = d.selector_by_edge()
    for nid, n in sorted(d.nodes.items()):
        if not isinstance(n.rule, MergedRule):
            continue
        covered: set[Edge] = set()
        for edge in d.out_edges(nid):
            for chosen in sel.get(edge, {}).values():
                covered.update(chosen)
        ins = set(d.in_edges(nid))
        if covered != ins:
            missing = sorted(ins - covered)
            extra = sorted(covered - ins)
            bad.append(f"node {nid}: selector covers {sorted(covered)}, "
                       f"ingoing edges are {sorted(ins)} "
                       f"(missing {missing}, extra {extra})")
        for edge in d.out_edges(nid):
            entries = sel.get(edge, {})
            for alpha in table.edges.get(edge, frozenset()):
                chosen = entries.get(alpha)
                if chosen is None:
                    bad.append(f"node {nid}: {alpha} crosses {edge} "
                               f"without a selector entry")
                elif not any(alpha in table.edges[e] for e in chosen):
                    bad.append(f"node {nid}: {alpha} crosses {edge} "
                               f"without a carrying witness")
    return bad


@dataclass
class VerifyOutcome:
    ok: bool
    af_correct: bool
    root_assumptions: frozenset
    steps: int
    error: Optional[str] = None


def verify_dag_stats(d: DagDeduction) -> VerifyOutcome:
    """Full verification verdict with the work counter.

    Expects a dag that already passes :func:`check_dag`.  The verdict is
    positive when the selector is selection-correct for the computed
    table and no assumption reaches the virtual edge below the root.
    """
    try:
        table = compute_af(d)
    except DagError as exc:
        return VerifyOutcome(False, False, frozenset(), 0, str(exc))
    correct = check_af_correctness(d, table)
    ok = correct and not table.root
    return VerifyOutcome(ok, correct, table.root, table.steps)


def verify_dag(d: DagDeduction) -> bool:
    return verify_dag_stats(d).ok


# --- the path-by-path oracle --------------------------------------------------


def enumerate_f_threads(d: DagDeduction,
                        limit: int = 2_000_000) -> list[tuple[tuple[int, ...], bool]]:
    """All selector-compatible leaf-to-root paths with their closure flags.

    A path from a leaf labeled ``a`` may step across a merged node only
    through edge pairs the selector routes ``a`` through; a missing entry
    blocks the step.  The path is closed when some node on it (root
    included) introduces ``a`` away — an ordinary introduction node, or a
    merged node entered through its introduction group's body edge whose
    conclusion's antecedent is ``a``.
    """
    sel = d.selector
    results: list[tuple[tuple[int, ...], bool]] = []
    for leaf in d.leaves:
        alpha = leaf.label
        stack: list[list[int]] = [[leaf.id]]
        while stack:
            path = stack.pop()
            last = path[-1]
            if last == d.root:
                results.append((tuple(path), dag_path_closed(d, path, alpha)))
                if len(results) > limit:
                    raise DagError("thread enumeration exceeded limit")
                continue
            prev = path[-2] if len(path) > 1 else None
            for (src, nxt) in reversed(d.out_edges(last)):
                if prev is not None and \
                        isinstance(d.nodes[last].rule, MergedRule):
                    chosen = sel.get(((last, nxt), alpha))
                    if chosen is None or (prev, last) not in chosen:
                        continue
                stack.append(path + [nxt])
    return results


def dag_path_closed(d: DagDeduction, path, alpha: Formula) -> bool:
    """Whether a leaf-to-root node sequence discharges ``alpha`` somewhere:
    by an ordinary introduction node, or by entering a merged node through
    its introduction group's body edge when the conclusion introduces
    ``alpha`` away."""
    for i, nid in enumerate(path):
        n = d.nodes[nid]
        if isinstance(n.rule, ImpIntro) and n.rule.discharge is alpha:
            return True
        if isinstance(n.rule, MergedRule) and i > 0:
            iprem = d.intro_premise_edge(nid)
            if iprem is not None and iprem == (path[i - 1], nid) \
                    and n.label.lhs is alpha:
                return True
    return False


def verify_by_threads(d: DagDeduction) -> bool:
    """Brute-force verdict: every selector-compatible thread is closed."""
    return all(closed for _, closed in enumerate_f_threads(d))


# --- embedding trees ----------------------------------------------------------


def tree_to_dag(ded: TreeDeduction) -> DagDeduction:
    """Embed a leveled tree as a dag with one node per tree node.

    The tree must be leveled, use only unary repetitions, and conclude by
    an introduction or elimination; the selector comes back empty.
    """
    if not ded.is_leveled():
        raise DagError("tree is not leveled")
    if not isinstance(ded.root.rule, (ImpIntro, ImpElim)):
        raise DagError("root must conclude by introduction or elimination")
    ids: dict[int, int] = {}
    nodes: list[DagNode] = []
    depths = ded.depths
    for i, t in enumerate(ded.nodes):
        ids[id(t)] = i
    for i, t in enumerate(ded.nodes):
        if isinstance(t.rule, Repeat) and len(t.premises) != 1:
            raise DagError("only unary repetitions embed into a dag")
        nodes.append(DagNode(i, t.label, depths[id(t)], t.rule,
                             tuple(ids[id(p)] for p in t.premises)))
    return DagDeduction(nodes, ids[id(ded.root)], {})


# --- unfolding -----------------------------------------------------------------


def unfold_dag(d: DagDeduction, max_nodes: int = 2_000_000) -> TreeDeduction:
    """Rebuild a tree deduction from a verified dag.

    Descends from the root, duplicating shared nodes per consuming edge.
    At a merged node reached through outgoing edge ``e`` the descent
    keeps the ingoing edges the selector routes through ``e`` for the
    assumptions still relevant on the current descent, keeps premise
    groups whole, and materializes each kept group as the matching plain
    inference; several kept groups combine under a repetition node.
    Raises when the dag does not verify or the tree would exceed
    ``max_nodes``.
    """
    outcome = verify_dag_stats(d)
    if not outcome.ok:
        raise DagError(outcome.error or "dag does not verify")
    sel = d.selector_by_edge()
    budget = [max_nodes]

    def make(label, rule, children) -> TreeNode:
        budget[0] -= 1
        if budget[0] < 0:
            raise DagError(f"unfolded tree exceeds {max_nodes} nodes")
        return TreeNode(label, rule, tuple(children))

    def go(nid: int, via: Optional[Edge], relevant: Optional[frozenset]) -> TreeNode:
        n = d.nodes[nid]
        rule = n.rule
        if isinstance(rule, Assumption):
            return make(n.label, rule, ())
        if not isinstance(rule, MergedRule):
            kids = [go(p, (p, nid), relevant) for p in n.premises]
            return make(n.label, rule, kids)

        entries = sel.get(via, {})
        route: dict[Edge, set] = {}
        for alpha, chosen in entries.items():
            if relevant is not None and alpha not in relevant:
                continue
            for e in chosen:
                route.setdefault(e, set()).add(alpha)
        kept = set(route)
        branches: list[TreeNode] = []
        chosen_groups = [g for g in rule.groups
                         if kept.intersection((m, nid) for m in g.members())]
        if not chosen_groups:
            chosen_groups = [rule.groups[0]]

        def sub(member: int) -> TreeNode:
            e = (member, nid)
            rel = frozenset(route.get(e, ()))
            return go(member, e, rel)

        for g in chosen_groups:
            if isinstance(g, TwinPair):
                branches.append(make(n.label, ImpElim(),
                                     (sub(g.minor), sub(g.major))))
            elif isinstance(g, IntroPremise):
                branches.append(make(n.label, ImpIntro(n.label.lhs),
                                     (sub(g.body),)))
            else:
                branches.append(make(n.label, Repeat(), (sub(g.body),)))
        if len(branches) == 1:
            return branches[0]
        return make(n.label, Repeat(), branches)

    return TreeDeduction(go(d.root, None, None))
