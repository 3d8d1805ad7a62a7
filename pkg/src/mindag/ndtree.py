"""Tree-shaped natural deduction for minimal implicational logic.

A deduction tree is drawn with its conclusion at the root and assumptions
at the leaves; premises sit above the node they justify.  The calculus has
arrow introduction (which may discharge vacuously), arrow elimination with
premises ordered (minor, major), and a repetition rule of any arity whose
premises all repeat the conclusion.  Repetition with several premises is
read disjunctively: the node is justified if any one premise branch is.

A tree proves its root label when every leaf-to-root path is *closed*:
somewhere on the path (the root included) an introduction discharges
exactly the leaf's label.  This is deliberately more liberal than "every
assumption is discharged strictly below itself" and is what the dag-side
verifiers are measured against.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Iterator, Optional

from mindag.formulas import Formula, FormulaTable


class TreeError(ValueError):
    """A structurally ill-formed deduction tree."""


class Rule:
    """Base class for inference-rule markers attached to tree nodes."""

    __slots__ = ()


@dataclass(frozen=True)
class Assumption(Rule):
    pass


@dataclass(frozen=True)
class ImpIntro(Rule):
    discharge: Formula


@dataclass(frozen=True)
class ImpElim(Rule):
    pass


@dataclass(frozen=True)
class Repeat(Rule):
    pass


@dataclass(frozen=True, eq=False)
class TreeNode:
    """One inference in a deduction tree.

    Nodes compare by identity: the same formula may label many distinct
    positions.  ``premises`` are ordered left to right; for elimination
    that order is (minor, major).
    """

    label: Formula
    rule: Rule
    premises: tuple["TreeNode", ...] = ()


def assumption(label: Formula) -> TreeNode:
    return TreeNode(label, Assumption())


def intro(discharge: Formula, premise: TreeNode,
          table: FormulaTable = None) -> TreeNode:
    label = (discharge.owner if table is None
             else table).implication(discharge, premise.label)
    return TreeNode(label, ImpIntro(discharge), (premise,))


def elim(minor: TreeNode, major: TreeNode) -> TreeNode:
    big = major.label
    if not big.is_implication or big.lhs is not minor.label:
        raise TreeError(
            f"elimination mismatch: minor {minor.label} vs major {big}")
    return TreeNode(big.rhs, ImpElim(), (minor, major))


def repeat(premises: Iterable[TreeNode]) -> TreeNode:
    prems = tuple(premises)
    if not prems:
        raise TreeError("repetition needs at least one premise")
    label = prems[0].label
    for p in prems[1:]:
        if p.label is not label:
            raise TreeError("repetition premises must share one label")
    return TreeNode(label, Repeat(), prems)


class TreeDeduction:
    """A deduction tree plus cached size and shape figures.

    ``height`` counts edges on the longest root-to-leaf path; ``weight``
    sums the weights of all node labels plus one per edge; ``phi`` sums
    the weights of the distinct labels occurring in the tree.
    """

    def __init__(self, root: TreeNode):
        self.root = root
        self._nodes: Optional[list[TreeNode]] = None
        self._depths: Optional[dict[int, int]] = None

    @property
    def nodes(self) -> list[TreeNode]:
        """All nodes in preorder (root first, premises left to right)."""
        if self._nodes is None:
            out: list[TreeNode] = []
            stack = [self.root]
            while stack:
                node = stack.pop()
                out.append(node)
                stack.extend(reversed(node.premises))
            self._nodes = out
        return self._nodes

    @property
    def depths(self) -> dict[int, int]:
        """Depth (edges from the root) keyed by ``id(node)``."""
        if self._depths is None:
            d: dict[int, int] = {id(self.root): 0}
            stack = [self.root]
            while stack:
                node = stack.pop()
                nd = d[id(node)] + 1
                for p in node.premises:
                    d[id(p)] = nd
                    stack.append(p)
            self._depths = d
        return self._depths

    def __len__(self) -> int:
        return len(self.nodes)

    @property
    def height(self) -> int:
        return max(self.depths.values())

    @property
    def weight(self) -> int:
        nodes = self.nodes
        return sum(n.label.weight for n in nodes) + len(nodes) - 1

    @property
    def phi(self) -> int:
        return sum(f.weight for f in {n.label for n in self.nodes})

    @property
    def leaves(self) -> list[TreeNode]:
        return [n for n in self.nodes if not n.premises]

    def is_leveled(self) -> bool:
        h = self.height
        depths = self.depths
        return all(depths[id(n)] == h for n in self.leaves)

    def __repr__(self) -> str:
        return (f"TreeDeduction({self.root.label}, nodes={len(self)}, "
                f"height={self.height})")


@dataclass(frozen=True)
class TreeReport:
    locally_correct: bool
    violations: tuple[str, ...]


@dataclass(frozen=True)
class TreeMetrics:
    h: int
    phi: int
    w: int
    normal: bool
    weak_subformula: bool


def check_tree(ded: TreeDeduction) -> TreeReport:
    """Validate every inference locally and report violations.

    Checks arities, that elimination premises fit together as
    (minor: a, major: a->b, conclusion: b), that introductions conclude
    (discharge -> premise), and that repetition premises repeat the
    conclusion.  Node ids in the report are preorder indices.
    """
    bad: list[str] = []
    for idx, node in enumerate(ded.nodes):
        rule = node.rule
        prems = node.premises
        if isinstance(rule, Assumption):
            if prems:
                bad.append(f"node {idx}: assumption {node.label} has premises")
        elif isinstance(rule, ImpIntro):
            if len(prems) != 1:
                bad.append(f"node {idx}: introduction of {node.label} "
                           f"needs exactly one premise")
                continue
            lab = node.label
            if not lab.is_implication or lab.lhs is not rule.discharge \
                    or lab.rhs is not prems[0].label:
                bad.append(f"node {idx}: label {node.label} is not "
                           f"(discharge {rule.discharge}) -> "
                           f"(premise {prems[0].label})")
        elif isinstance(rule, ImpElim):
            if len(prems) != 2:
                bad.append(f"node {idx}: elimination of {node.label} "
                           f"needs two premises")
                continue
            minor, major = prems
            big = major.label
            if not big.is_implication or big.lhs is not minor.label:
                bad.append(f"node {idx}: major premise mismatch: "
                           f"minor {minor.label}, major {big}")
            elif big.rhs is not node.label:
                bad.append(f"node {idx}: conclusion {node.label} differs "
                           f"from major consequent {big.rhs}")
        elif isinstance(rule, Repeat):
            if not prems:
                bad.append(f"node {idx}: repetition of {node.label} "
                           f"needs premises")
            for p in prems:
                if p.label is not node.label:
                    bad.append(f"node {idx}: repetition premise {p.label} "
                               f"differs from conclusion {node.label}")
        else:
            bad.append(f"node {idx}: unknown rule {rule!r}")
    return TreeReport(not bad, tuple(bad))


def is_locally_correct(ded: TreeDeduction) -> bool:
    return check_tree(ded).locally_correct


def is_normal(ded: TreeDeduction) -> bool:
    """No node is both an introduction conclusion and a major premise."""
    for node in ded.nodes:
        if isinstance(node.rule, ImpElim):
            major = node.premises[1]
            if isinstance(major.rule, ImpIntro):
                return False
    return True


def _subterms(f: Formula) -> frozenset:
    out = set()
    stack = [f]
    while stack:
        g = stack.pop()
        if g in out:
            continue
        out.add(g)
        if g.is_implication:
            stack.append(g.lhs)
            stack.append(g.rhs)
    return frozenset(out)


def has_weak_subformula_property(ded: TreeDeduction) -> bool:
    """Every label on every maximal path is a subformula of the conclusion
    or of an assumption discharged by an introduction on that path."""
    base = _subterms(ded.root.label)
    stack: list[tuple[TreeNode, frozenset]] = [(ded.root, base)]
    while stack:
        node, allowed = stack.pop()
        if isinstance(node.rule, ImpIntro):
            allowed = allowed | _subterms(node.rule.discharge)
        if node.label not in allowed:
            return False
        for p in node.premises:
            stack.append((p, allowed))
    return True


def tree_metrics(ded: TreeDeduction) -> TreeMetrics:
    return TreeMetrics(ded.height, ded.phi, ded.weight,
                       is_normal(ded), has_weak_subformula_property(ded))


def proves_tree(ded: TreeDeduction) -> bool:
    """Whether every leaf-to-root path is closed.

    A path is closed when some node on it (the root included) is an
    introduction discharging the leaf's label.
    """
    stack: list[tuple[TreeNode, frozenset]] = [(ded.root, frozenset())]
    while stack:
        node, seen = stack.pop()
        if isinstance(node.rule, ImpIntro):
            seen = seen | {node.rule.discharge}
        if not node.premises:
            if node.label not in seen:
                return False
        else:
            for p in node.premises:
                stack.append((p, seen))
    return True


def open_leaves(ded: TreeDeduction) -> list[TreeNode]:
    """Leaves that sit on at least one unclosed path."""
    out: list[TreeNode] = []
    stack: list[tuple[TreeNode, frozenset]] = [(ded.root, frozenset())]
    while stack:
        node, seen = stack.pop()
        if isinstance(node.rule, ImpIntro):
            seen = seen | {node.rule.discharge}
        if not node.premises:
            if node.label not in seen:
                out.append(node)
        else:
            for p in node.premises:
                stack.append((p, seen))
    return out


def _rebuild(root: TreeNode,
             make: Callable[[TreeNode, tuple[TreeNode, ...]], TreeNode],
             children: Callable[[TreeNode], tuple[TreeNode, ...]] = None
             ) -> TreeNode:
    """Bottom-up structural rebuild without recursion."""
    kids = children or (lambda n: n.premises)
    done: dict[int, TreeNode] = {}
    stack: list[tuple[TreeNode, bool]] = [(root, False)]
    while stack:
        node, expanded = stack.pop()
        if expanded:
            done[id(node)] = make(
                node, tuple(done[id(p)] for p in kids(node)))
        else:
            stack.append((node, True))
            stack.extend((p, False) for p in kids(node))
    return done[id(root)]


def level_tree(ded: TreeDeduction) -> TreeDeduction:
    """Pad every short branch so all leaves sit at the tree's height.

    Between each too-shallow leaf and its former parent a chain of unary
    repetitions of the leaf's label is spliced in; the leaf itself stays
    topmost.  Height, conclusion, and the largest label weight are all
    unchanged, and closed paths stay closed.
    """
    h = ded.height
    depths = ded.depths

    def make(node: TreeNode, prems: tuple[TreeNode, ...]) -> TreeNode:
        if node.premises:
            if all(a is b for a, b in zip(prems, node.premises)):
                return node
            return TreeNode(node.label, node.rule, prems)
        pad = h - depths[id(node)]
        out = node
        for _ in range(pad):
            out = TreeNode(node.label, Repeat(), (out,))
        return out

    return TreeDeduction(_rebuild(ded.root, make))


def _all_paths_closed(root: TreeNode, context: frozenset) -> bool:
    """Whether every leaf path inside ``root`` is closed, given that the
    formulas in ``context`` are already discharged further down."""
    stack = [(root, context)]
    while stack:
        node, seen = stack.pop()
        if isinstance(node.rule, ImpIntro):
            seen = seen | {node.rule.discharge}
        if not node.premises:
            if node.label not in seen:
                return False
        else:
            stack.extend((p, seen) for p in node.premises)
    return True


def eliminate_repetitions(ded: TreeDeduction) -> TreeDeduction:
    """Splice out every repetition node, keeping one justified branch.

    At each repetition the leftmost premise whose subtree is entirely
    closed relative to the discharges accumulated below is kept and wired
    to the repetition's parent.  On a tree that proves its conclusion
    every premise qualifies, so the result is a plain deduction (no
    repetitions) proving the same formula.  Raises :class:`TreeError`
    when some repetition has no justified branch, which means the input
    did not prove its conclusion in the first place.
    """
    chosen: dict[int, TreeNode] = {}
    stack: list[tuple[TreeNode, frozenset]] = [(ded.root, frozenset())]
    while stack:
        node, ctx = stack.pop()
        if isinstance(node.rule, ImpIntro):
            ctx = ctx | {node.rule.discharge}
        if isinstance(node.rule, Repeat):
            for prem in node.premises:
                if _all_paths_closed(prem, ctx):
                    chosen[id(node)] = prem
                    stack.append((prem, ctx))
                    break
            else:
                raise TreeError(
                    f"no justified branch at repetition of {node.label}; "
                    f"the tree does not prove its conclusion")
        else:
            stack.extend((p, ctx) for p in node.premises)

    def kids(node: TreeNode) -> tuple[TreeNode, ...]:
        if isinstance(node.rule, Repeat):
            return (chosen[id(node)],)
        return node.premises

    def make(node: TreeNode, prems: tuple[TreeNode, ...]) -> TreeNode:
        if isinstance(node.rule, Repeat):
            return prems[0]
        if all(a is b for a, b in zip(prems, node.premises)):
            return node
        return TreeNode(node.label, node.rule, prems)

    return TreeDeduction(_rebuild(ded.root, make, kids))


def uses_repetition(ded: TreeDeduction) -> bool:
    return any(isinstance(n.rule, Repeat) for n in ded.nodes)
