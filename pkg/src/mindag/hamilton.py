"""Hamiltonian-path encodings and the purely implicational translation.

``encode_alpha`` builds, for a directed graph, the full-language formula
that is classically satisfiable exactly when the graph has a Hamiltonian
path: position variables ``X_<i>_<vertex>`` constrained so every vertex
takes some position (A), no vertex takes two positions (B), every
position is taken (C), no two vertices share a position (D), and
consecutive positions follow arcs (E).  ``statman_translate`` then maps
any full-language formula to a purely implicational one by introducing a
fresh variable per compound subformula and chaining the defining axioms
in front of the translated goal; its output grows at most cubically for
all but the very smallest inputs.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from typing import Iterable, Optional

from mindag.formulas import (
    FULL_TABLE,
    TABLE,
    Formula,
    FormulaError,
    FormulaTable,
    FullFormula,
    FullFormulaTable,
    KIND_AND,
    KIND_ATOM,
    KIND_FALSE,
    KIND_IMP,
    KIND_OR,
)


class GraphError(ValueError):
    """An unusable graph description."""


@dataclass(frozen=True)
class DiGraph:
    """A directed graph on vertices ``v1 .. vn`` (indices 1-based)."""
    n: int
    edges: frozenset

    def __post_init__(self):
        for (u, v) in self.edges:
            if not (1 <= u <= self.n and 1 <= v <= self.n):
                raise GraphError(f"edge ({u},{v}) leaves the vertex range")

    def has_edge(self, u: int, v: int) -> bool:
        return (u, v) in self.edges

    def __str__(self) -> str:
        lines = [f"n {self.n}"]
        lines.extend(f"v{u} v{v}" for (u, v) in sorted(self.edges))
        return "\n".join(lines) + "\n"


def parse_graph(text: str) -> DiGraph:
    """Read the edge-list format: first line ``n <count>``, then one
    ``u v`` pair of vertex names per line."""
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines:
        raise GraphError("empty graph description")
    head = lines[0].split()
    if len(head) != 2 or head[0] != "n" or not head[1].isdigit():
        raise GraphError(f"first line must be 'n <count>', got {lines[0]!r}")
    n = int(head[1])
    if n < 1:
        raise GraphError("a graph needs at least one vertex")

    def vertex(tok: str) -> int:
        m = re.fullmatch(r"v([0-9]+)", tok)
        if not m or not (1 <= int(m.group(1)) <= n):
            raise GraphError(f"unknown vertex {tok!r}")
        return int(m.group(1))

    edges = set()
    for ln in lines[1:]:
        toks = ln.split()
        if len(toks) != 2:
            raise GraphError(f"bad edge line {ln!r}")
        e = (vertex(toks[0]), vertex(toks[1]))
        if e in edges:
            raise GraphError(f"duplicate edge {ln!r}")
        edges.add(e)
    return DiGraph(n, frozenset(edges))


def all_digraphs(n: int) -> Iterable[DiGraph]:
    """Every loop-free digraph on ``n`` labeled vertices."""
    pairs = [(u, v) for u in range(1, n + 1) for v in range(1, n + 1)
             if u != v]
    for bits in range(1 << len(pairs)):
        edges = frozenset(p for k, p in enumerate(pairs) if bits >> k & 1)
        yield DiGraph(n, edges)


def random_digraph(rng, n: int, edge_prob: float = 0.5) -> DiGraph:
    edges = frozenset((u, v)
                      for u in range(1, n + 1) for v in range(1, n + 1)
                      if u != v and rng.random() < edge_prob)
    return DiGraph(n, edges)


def hamiltonicity_oracle(g: DiGraph) -> bool:
    """Brute-force Hamiltonian-path test by trying all vertex orders."""
    if g.n > 10:
        raise GraphError("the brute-force oracle is limited to 10 vertices")
    for perm in itertools.permutations(range(1, g.n + 1)):
        if all(g.has_edge(perm[i], perm[i + 1]) for i in range(g.n - 1)):
            return True
    return False


# --- the position encoding ----------------------------------------------------


def position_variable(table: FullFormulaTable, i: int, v: int) -> FullFormula:
    return table.atom(f"X_{i}_v{v}")


def encode_alpha(g: DiGraph,
                 table: Optional[FullFormulaTable] = None) -> FullFormula:
    """The Hamiltonian-path formula of ``g`` over position variables."""
    t = FULL_TABLE if table is None else table
    n = g.n

    def x(i: int, v: int) -> FullFormula:
        return position_variable(t, i, v)

    def neg_pair(a: FullFormula, b: FullFormula) -> FullFormula:
        return t.implication(a, t.implication(b, t.falsum()))

    def conj(parts: list) -> Optional[FullFormula]:
        out = None
        for p in parts:
            out = p if out is None else t.conj(out, p)
        return out

    def disj(parts: list) -> FullFormula:
        out = None
        for p in parts:
            out = p if out is None else t.disj(out, p)
        return out

    groups = []

    # A: every vertex takes some position
    groups.append(conj([disj([x(i, v) for i in range(1, n + 1)])
                        for v in range(1, n + 1)]))
    # B: no vertex takes two positions
    b_parts = []
    for v in range(1, n + 1):
        for i, j in itertools.combinations(range(1, n + 1), 2):
            b_parts.append(neg_pair(x(i, v), x(j, v)))
            b_parts.append(neg_pair(x(j, v), x(i, v)))
    groups.append(conj(b_parts))
    # C: every position is taken
    groups.append(conj([disj([x(i, v) for v in range(1, n + 1)])
                        for i in range(1, n + 1)]))
    # D: no two vertices share a position
    d_parts = []
    for v in range(1, n + 1):
        for w in range(1, n + 1):
            if v == w:
                continue
            for i in range(1, n + 1):
                d_parts.append(neg_pair(x(i, v), x(i, w)))
    groups.append(conj(d_parts))
    # E: consecutive positions follow arcs
    e_parts = []
    for v in range(1, n + 1):
        for w in range(1, n + 1):
            if g.has_edge(v, w):
                continue
            for i in range(1, n):
                e_parts.append(neg_pair(x(i, v), x(i + 1, w)))
    groups.append(conj(e_parts))

    alpha = conj([p for p in groups if p is not None])
    if alpha is None:
        raise GraphError("encoding produced no constraints")
    return alpha


# --- classical satisfiability ----------------------------------------------------


_PATTERNS: dict = {}


def _pattern(i: int, k: int) -> int:
    """Truth-table bits of inner variable ``i`` over ``2**k`` rows."""
    key = (i, k)
    got = _PATTERNS.get(key)
    if got is None:
        block = 1 << (1 << i)
        got = ((1 << (1 << k)) - 1) // (block + 1) * block
        _PATTERNS[key] = got
    return got


def classical_sat(f: FullFormula, limit: int = 25) -> bool:
    """Exhaustive two-valued satisfiability, bit-parallel over blocks of
    up to 18 variables at once.  Refuses more than ``limit`` distinct
    variables (and never more than 26)."""
    if limit > 26:
        raise FormulaError("the satisfiability ceiling is 26 variables")
    atoms = sorted({g.id: g for g in _full_subterms(f)
                    if g.kind == KIND_ATOM}.values(), key=lambda a: a.id)
    nv = len(atoms)
    if nv > limit:
        raise FormulaError(f"{nv} variables exceed the limit of {limit}")
    k = min(nv, 18)
    mask = (1 << (1 << k)) - 1
    inner = {atoms[i].id: _pattern(i, k) for i in range(k)}
    outer_atoms = atoms[k:]

    order = _full_postorder(f)
    for bits in range(1 << (nv - k)):
        env = dict(inner)
        for j, a in enumerate(outer_atoms):
            env[a.id] = mask if bits >> j & 1 else 0
        val: dict[int, int] = {}
        for g in order:
            if g.kind == KIND_ATOM:
                val[g.id] = env[g.id]
            elif g.kind == KIND_FALSE:
                val[g.id] = 0
            elif g.kind == KIND_AND:
                val[g.id] = val[g.lhs.id] & val[g.rhs.id]
            elif g.kind == KIND_OR:
                val[g.id] = val[g.lhs.id] | val[g.rhs.id]
            else:
                val[g.id] = (~val[g.lhs.id] | val[g.rhs.id]) & mask
        if val[f.id]:
            return True
    return False


def _full_subterms(f: FullFormula) -> list[FullFormula]:
    return _full_postorder(f)


def _full_postorder(f: FullFormula) -> list[FullFormula]:
    seen: set[int] = set()
    out: list[FullFormula] = []
    stack: list[tuple[FullFormula, bool]] = [(f, False)]
    while stack:
        g, expanded = stack.pop()
        if expanded:
            out.append(g)
            continue
        if g.id in seen:
            continue
        seen.add(g.id)
        stack.append((g, True))
        if g.lhs is not None:
            stack.append((g.rhs, False))
            stack.append((g.lhs, False))
    return out


# --- purely implicational translation ----------------------------------------------


@dataclass
class StatmanResult:
    gamma_star: Formula
    goal_representative: Formula
    axioms: tuple[Formula, ...]
    representatives: dict


def statman_translate(f: FullFormula,
                      table: Optional[FormulaTable] = None) -> StatmanResult:
    """Replace compound subformulas by fresh variables and chain their
    defining axioms in front of the translated goal.

    Atoms map to themselves; every other subformula ``d`` (the constant
    included) gets the variable ``q_<id>``.  The axioms, enumerated in
    subformula postorder, characterize each variable against the
    representatives of its parts, quantifying over all subformula
    representatives where disjunction and the constant require it.  The
    result is ``ax1 -> (ax2 -> ... -> (axm -> <f>))``.
    """
    t = TABLE if table is None else table
    order = _full_postorder(f)
    reps: dict[int, Formula] = {}
    for g in order:
        if g.kind == KIND_ATOM:
            reps[g.id] = t.atom(g.name)
        else:
            reps[g.id] = t.atom(f"q_{g.id}")
    universe = [reps[g.id] for g in order]

    axioms: list[Formula] = []
    for g in order:
        q = reps[g.id]
        if g.kind == KIND_ATOM:
            continue
        if g.kind == KIND_FALSE:
            axioms.extend(t.implication(q, u) for u in universe)
            continue
        a = reps[g.lhs.id]
        b = reps[g.rhs.id]
        if g.kind == KIND_AND:
            axioms.append(t.implication(q, a))
            axioms.append(t.implication(q, b))
            axioms.append(t.implication(a, t.implication(b, q)))
        elif g.kind == KIND_OR:
            axioms.append(t.implication(a, q))
            axioms.append(t.implication(b, q))
            for u in universe:
                axioms.append(
                    t.implication(t.implication(a, u),
                                  t.implication(t.implication(b, u),
                                                t.implication(q, u))))
        else:
            arrow = t.implication(a, b)
            axioms.append(t.implication(q, arrow))
            axioms.append(t.implication(arrow, q))

    goal = reps[f.id]
    gamma = goal
    for ax in reversed(axioms):
        gamma = t.implication(ax, gamma)
    return StatmanResult(gamma, goal, tuple(axioms), reps)


def cube_bound_holds(f: FullFormula,
                     table: Optional[FormulaTable] = None) -> tuple[bool, int, int]:
    """Whether the translated goal fits inside ``size(f)**3``."""
    res = statman_translate(f, table)
    size = res.gamma_star.weight
    return size <= f.weight ** 3, size, f.weight


def rho_g(g: DiGraph,
          full_table: Optional[FullFormulaTable] = None,
          table: Optional[FormulaTable] = None) -> StatmanResult:
    """The implicational formula whose provability mirrors the absence
    of a Hamiltonian path: translate ``alpha -> false``."""
    t = FULL_TABLE if full_table is None else full_table
    alpha = encode_alpha(g, t)
    return statman_translate(t.implication(alpha, t.falsum()), table)
