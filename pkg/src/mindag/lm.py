"""Backward proof search in a contraction-free sequent calculus, plus the
translation of found proofs into natural-deduction trees.

Sequents have multiset antecedents and a single succedent.  The five
rules, read backward from the goal:

- ``MA``   closes ``G, p => p`` for atomic ``p``;
- ``MI1``  reduces ``G => a->b`` to ``G, a => b`` when no ``(a->b)->c``
  is in ``G``;
- ``MI2``  reduces ``G, (a->b)->c => a->b`` to ``G, a, b->c => b``;
- ``MEP``  reduces ``G, p, p->c => q`` to ``G, p, c => q`` for atomic
  ``p != q`` with ``q`` occurring in ``G`` or ``c``;
- ``MEE``  reduces ``G, (a->b)->c => q`` to the pair ``G, a, b->c => b``
  and ``G, c => q``, again with ``q`` occurring in ``G`` or ``c``.

The searcher is depth-bounded (a multiple of the goal's weight), caches
failed sequents per remaining depth, and distinguishes an exhausted
search from one that ran out of its node budget.
"""

from __future__ import annotations

import sys
import threading
from dataclasses import dataclass, field
from typing import Optional

from mindag.formulas import Formula, Sequent, sequent, variables, weight
from mindag.ndtree import (
    TreeDeduction,
    TreeNode,
    assumption,
    elim,
    intro,
    _rebuild,
)

RULES = ("MA", "MEP", "MI2", "MI1", "MEE")

DEFAULT_BOUND_MULTIPLIER = 2.0
DEFAULT_NODE_BUDGET = 400_000


class LmError(ValueError):
    """An ill-formed sequent proof."""


@dataclass(frozen=True, eq=False)
class LmNode:
    sequent: Sequent
    rule: str
    witnesses: tuple[tuple[str, Formula], ...]
    premises: tuple["LmNode", ...] = ()

    def witness(self, name: str) -> Optional[Formula]:
        for key, val in self.witnesses:
            if key == name:
                return val
        return None


@dataclass
class LmProof:
    root: LmNode

    @property
    def nodes(self) -> list[LmNode]:
        out: list[LmNode] = []
        stack = [self.root]
        while stack:
            n = stack.pop()
            out.append(n)
            stack.extend(reversed(n.premises))
        return out

    @property
    def height(self) -> int:
        best = {id(self.root): 0}
        for n in self.nodes:
            for p in n.premises:
                best[id(p)] = best[id(n)] + 1
        return max(best.values())

    def __len__(self) -> int:
        return len(self.nodes)


@dataclass
class LmResult:
    status: str                  # "proved" | "unproved" | "budget_exceeded"
    proof: Optional[LmProof]
    visited: int
    depth_bound: int

    @property
    def proved(self) -> bool:
        return self.status == "proved"


# --- rule schema checking ----------------------------------------------------


@dataclass(frozen=True)
class LmReport:
    ok: bool
    violations: tuple[str, ...]


def _minus(bag: tuple[Formula, ...], *drop: Formula) -> list[Formula]:
    out = list(bag)
    for f in drop:
        out.remove(f)
    return out


def _vars_of(parts) -> set[str]:
    out: set[str] = set()
    for f in parts:
        out.update(variables(f))
    return out


def check_lm(proof: LmProof) -> LmReport:
    """Schema-check every inference of a sequent proof."""
    bad: list[str] = []
    for k, n in enumerate(proof.nodes):
        try:
            _check_node(n)
        except LmError as exc:
            bad.append(f"node {k}: {exc}")
    return LmReport(not bad, tuple(bad))


def _check_node(n: LmNode) -> None:
    seq = n.sequent
    ant = seq.antecedent
    goal = seq.succedent
    if n.rule == "MA":
        if n.premises:
            raise LmError("axiom with premises")
        if not goal.is_atom or goal not in ant:
            raise LmError(f"{seq} is not an axiom instance")
        return
    if n.rule == "MI1":
        if len(n.premises) != 1:
            raise LmError("one premise expected")
        if not goal.is_implication:
            raise LmError("succedent is not an implication")
        if any(f.is_implication and f.lhs is goal for f in ant):
            raise LmError("blocked: the antecedent nests the succedent")
        want = sequent(list(ant) + [goal.lhs], goal.rhs)
        if n.premises[0].sequent != want:
            raise LmError(f"premise {n.premises[0].sequent}, wanted {want}")
        return
    if n.rule == "MI2":
        principal = n.witness("principal")
        if len(n.premises) != 1 or principal is None:
            raise LmError("one premise and a principal formula expected")
        if principal not in ant or not goal.is_implication \
                or not principal.is_implication or principal.lhs is not goal:
            raise LmError(f"principal {principal} does not fit {seq}")
        rest = _minus(ant, principal)
        from mindag.formulas import imp
        want = sequent(rest + [goal.lhs, imp(goal.rhs, principal.rhs)],
                       goal.rhs)
        if n.premises[0].sequent != want:
            raise LmError(f"premise {n.premises[0].sequent}, wanted {want}")
        return
    if n.rule == "MEP":
        p = n.witness("minor")
        principal = n.witness("principal")
        if len(n.premises) != 1 or p is None or principal is None:
            raise LmError("one premise, a minor atom, and a principal "
                          "implication expected")
        if not goal.is_atom or not p.is_atom or p is goal:
            raise LmError("endpoints must be distinct atoms")
        if principal not in ant or not principal.is_implication \
                or principal.lhs is not p or p not in _minus(ant, principal):
            raise LmError(f"{p} / {principal} not available in {seq}")
        rest = _minus(ant, principal, p)
        if goal.name not in _vars_of(rest + [principal.rhs]):
            raise LmError(f"{goal} does not occur in the context")
        want = sequent(_minus(ant, principal) + [principal.rhs], goal)
        if n.premises[0].sequent != want:
            raise LmError(f"premise {n.premises[0].sequent}, wanted {want}")
        return
    if n.rule == "MEE":
        principal = n.witness("principal")
        if len(n.premises) != 2 or principal is None:
            raise LmError("two premises and a principal formula expected")
        if not goal.is_atom or principal not in ant \
                or not principal.is_implication \
                or not principal.lhs.is_implication:
            raise LmError(f"principal {principal} does not fit {seq}")
        rest = _minus(ant, principal)
        if goal.name not in _vars_of(rest + [principal.rhs]):
            raise LmError(f"{goal} does not occur in the context")
        inner = principal.lhs
        from mindag.formulas import imp
        want1 = sequent(rest + [inner.lhs, imp(inner.rhs, principal.rhs)],
                        inner.rhs)
        want2 = sequent(rest + [principal.rhs], goal)
        got = (n.premises[0].sequent, n.premises[1].sequent)
        if got != (want1, want2):
            raise LmError(f"premises {got}, wanted {(want1, want2)}")
        return
    raise LmError(f"unknown rule {n.rule}")


# --- backward search ----------------------------------------------------------


class _Budget(Exception):
    pass


def prove_lm(goal: Sequent,
             bound_multiplier: float = DEFAULT_BOUND_MULTIPLIER,
             node_budget: int = DEFAULT_NODE_BUDGET) -> LmResult:
    """Depth-bounded exhaustive backward search.

    The depth bound is ``bound_multiplier`` times the goal's weight.  A
    negative answer within budget means no proof exists within that
    depth; running out of budget is reported separately and never as a
    refutation.
    """
    from mindag.formulas import imp

    bound = max(1, int(bound_multiplier * weight(goal)))
    visited = [0]
    failed: dict[tuple, int] = {}
    proved: dict[tuple, LmNode] = {}

    def attempt(seq: Sequent, depth: int) -> Optional[LmNode]:
        key = seq.key()
        hit = proved.get(key)
        if hit is not None:
            return hit
        if failed.get(key, -1) >= depth:
            return None
        visited[0] += 1
        if visited[0] > node_budget:
            raise _Budget()

        ant = seq.antecedent
        goal_ = seq.succedent
        found: Optional[LmNode] = None

        # MA
        if goal_.is_atom and goal_ in ant:
            found = LmNode(seq, "MA", (("atom", goal_),))
        if found is None and depth > 0:
            found = _try_rules(seq, ant, goal_, depth)
        if found is not None:
            proved[key] = found
            return found
        prev = failed.get(key, -1)
        if depth > prev:
            failed[key] = depth
        return None

    def _try_rules(seq, ant, goal_, depth) -> Optional[LmNode]:
        # MEP
        if goal_.is_atom:
            for principal in _by_id(f for f in ant
                                    if f.is_implication and f.lhs.is_atom):
                p = principal.lhs
                if p is goal_ or p not in _minus(ant, principal):
                    continue
                rest = _minus(ant, principal, p)
                if goal_.name not in _vars_of(rest + [principal.rhs]):
                    continue
                prem = attempt(sequent(_minus(ant, principal)
                                       + [principal.rhs], goal_), depth - 1)
                if prem is not None:
                    return LmNode(seq, "MEP",
                                  (("minor", p), ("principal", principal)),
                                  (prem,))
        # MI2
        if goal_.is_implication:
            for principal in _by_id(f for f in ant
                                    if f.is_implication and f.lhs is goal_):
                prem = attempt(
                    sequent(_minus(ant, principal)
                            + [goal_.lhs, imp(goal_.rhs, principal.rhs)],
                            goal_.rhs), depth - 1)
                if prem is not None:
                    return LmNode(seq, "MI2", (("principal", principal),),
                                  (prem,))
        # MI1
        if goal_.is_implication \
                and not any(f.is_implication and f.lhs is goal_ for f in ant):
            prem = attempt(sequent(list(ant) + [goal_.lhs], goal_.rhs),
                           depth - 1)
            if prem is not None:
                return LmNode(seq, "MI1", (), (prem,))
        # MEE
        if goal_.is_atom:
            for principal in _by_id(f for f in ant
                                    if f.is_implication
                                    and f.lhs.is_implication):
                rest = _minus(ant, principal)
                if goal_.name not in _vars_of(rest + [principal.rhs]):
                    continue
                inner = principal.lhs
                left = attempt(
                    sequent(rest + [inner.lhs,
                                    imp(inner.rhs, principal.rhs)],
                            inner.rhs), depth - 1)
                if left is None:
                    continue
                right = attempt(sequent(rest + [principal.rhs], goal_),
                                depth - 1)
                if right is not None:
                    return LmNode(seq, "MEE", (("principal", principal),),
                                  (left, right))
        return None

    def search() -> LmResult:
        try:
            node = attempt(goal, bound)
        except _Budget:
            return LmResult("budget_exceeded", None, visited[0], bound)
        if node is None:
            return LmResult("unproved", None, visited[0], bound)
        return LmResult("proved", LmProof(node), visited[0], bound)

    # the recursion runs ~3 frames per depth step; large goals need more
    # room than the interpreter default, so give those their own thread
    # with a stack to match
    frames_needed = 4 * bound + 2000
    if frames_needed <= sys.getrecursionlimit():
        return search()
    box: list = []

    def run():
        old = sys.getrecursionlimit()
        sys.setrecursionlimit(frames_needed)
        try:
            box.append(search())
        except BaseException as exc:     # surface in the caller
            box.append(exc)
        finally:
            sys.setrecursionlimit(old)

    old_stack = threading.stack_size(
        min(512 * 1024 * 1024, max(32 * 1024 * 1024, frames_needed * 4096)))
    try:
        worker = threading.Thread(target=run, name="lm-search")
        worker.start()
        worker.join()
    finally:
        threading.stack_size(old_stack)
    if isinstance(box[0], BaseException):
        raise box[0]
    return box[0]


def _by_id(formulas) -> list[Formula]:
    seen = set()
    out = []
    for f in sorted(formulas, key=lambda g: g.id):
        if f.id not in seen:
            seen.add(f.id)
            out.append(f)
    return out


# --- translation to natural deduction ------------------------------------------


def _substitute_open(root: TreeNode, target: Formula, build) -> TreeNode:
    """Replace every *open* leaf labeled ``target`` with a fresh copy of
    the replacement; leaves discharged on their path stay put."""
    open_ids: set[int] = set()
    stack: list[tuple[TreeNode, bool]] = [(root, False)]
    while stack:
        node, shadowed = stack.pop()
        from mindag.ndtree import ImpIntro
        if isinstance(node.rule, ImpIntro) and node.rule.discharge is target:
            shadowed = True
        if not node.premises:
            if node.label is target and not shadowed:
                open_ids.add(id(node))
        else:
            stack.extend((p, shadowed) for p in node.premises)

    def make(node: TreeNode, prems: tuple[TreeNode, ...]) -> TreeNode:
        if id(node) in open_ids:
            return build()
        if all(a is b for a, b in zip(prems, node.premises)) \
                and len(prems) == len(node.premises):
            return node
        return TreeNode(node.label, node.rule, prems)

    return _rebuild(root, make)


def _gadget(principal: Formula):
    """From ``(a->b)->c`` derive ``b->c``: assume ``b``, introduce ``a``
    vacuously, eliminate with the principal, discharge ``b``."""
    inner = principal.lhs

    def build() -> TreeNode:
        step = intro(inner.lhs, assumption(inner.rhs))
        return intro(inner.rhs, elim(step, assumption(principal)))

    return build


def translate_lm_to_nd(proof: LmProof) -> TreeDeduction:
    """Turn a sequent proof into a deduction tree for the succedent.

    The result concludes the root succedent; its open assumptions are
    among the root antecedent.  An empty antecedent therefore yields a
    tree that proves its conclusion outright.
    """
    from mindag.formulas import imp

    def go(n: LmNode) -> TreeNode:
        seq = n.sequent
        goal_ = seq.succedent
        if n.rule == "MA":
            return assumption(goal_)
        if n.rule == "MI1":
            return intro(goal_.lhs, go(n.premises[0]))
        if n.rule == "MI2":
            principal = n.witness("principal")
            body = _substitute_open(
                go(n.premises[0]),
                imp(goal_.rhs, principal.rhs),
                _gadget(principal))
            return intro(goal_.lhs, body)
        if n.rule == "MEP":
            principal = n.witness("principal")
            body = go(n.premises[0])
            return _substitute_open(
                body, principal.rhs,
                lambda: elim(assumption(principal.lhs),
                             assumption(principal)))
        if n.rule == "MEE":
            principal = n.witness("principal")
            inner = principal.lhs
            left = _substitute_open(
                go(n.premises[0]),
                imp(inner.rhs, principal.rhs),
                _gadget(principal))
            derived = elim(intro(inner.lhs, left), assumption(principal))
            return _substitute_open(go(n.premises[1]), principal.rhs,
                                    lambda: _copy(derived))
        raise LmError(f"unknown rule {n.rule}")

    return TreeDeduction(go(proof.root))


def _copy(root: TreeNode) -> TreeNode:
    return _rebuild(root, lambda n, prems: TreeNode(n.label, n.rule, prems))
