"""Interned formula terms, parsing, and weight accounting.

Two term languages share one lexer: the implicational core (variables and
"->") used by the deduction calculi, and the full propositional language
(which adds "&", "|", and the constant "false") used by the graph
encodings.  Terms are hash-consed per table, so structural equality is
plain identity and every distinct term carries a dense integer id.  Ids
are assigned bottom-up, which gives every table a ready-made topological
order: a term's children always have smaller ids than the term itself.

Do not mix terms from different tables; all identity-based operations
assume a single table.  Every term remembers the table that interned it,
so helpers that take a term as operand (``imp``, ``subformulas``, tree
builders) stay inside that term's table; only helpers with no operand to
look at (``atom``, the parsers) default to the module-level tables.
"""

from __future__ import annotations

import string
import threading
from dataclasses import dataclass
from typing import Iterable, Iterator, Optional

NAME_CHARS = frozenset(string.ascii_letters + string.digits + "_.")
RESERVED_WORDS = frozenset({"false"})


class FormulaError(ValueError):
    """Raised for malformed formula constructions."""


class ParseError(FormulaError):
    """Syntax error with a character offset into the parsed text."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (offset {position})")
        self.position = position


def _check_name(name: str) -> None:
    if not name or not set(name) <= NAME_CHARS:
        raise FormulaError(f"invalid variable name: {name!r}")
    if name in RESERVED_WORDS:
        raise FormulaError(f"reserved word used as variable name: {name!r}")


class Formula:
    """An implicational formula: a variable or an implication.

    Instances are created only through a :class:`FormulaTable`; never call
    the constructor directly.  ``lhs``/``rhs`` are ``None`` for variables,
    ``name`` is ``None`` for implications.  ``weight`` counts one unit per
    variable occurrence and one per arrow.
    """

    __slots__ = ("id", "name", "lhs", "rhs", "weight", "owner")

    def __init__(self, ident: int, name: Optional[str],
                 lhs: Optional["Formula"], rhs: Optional["Formula"],
                 weight: int, owner: "FormulaTable"):
        self.id = ident
        self.name = name
        self.lhs = lhs
        self.rhs = rhs
        self.weight = weight
        self.owner = owner

    @property
    def is_atom(self) -> bool:
        return self.name is not None

    @property
    def is_implication(self) -> bool:
        return self.name is None

    def __str__(self) -> str:
        return format_formula(self)

    def __repr__(self) -> str:
        return format_formula(self)


class FormulaTable:
    """Hash-consing table for implicational formulas."""

    def __init__(self) -> None:
        self._atoms: dict[str, Formula] = {}
        self._imps: dict[tuple[int, int], Formula] = {}
        self._items: list[Formula] = []
        self._sub_cache: dict[int, frozenset] = {}
        self._var_cache: dict[int, frozenset] = {}
        self._lock = threading.Lock()

    def __len__(self) -> int:
        return len(self._items)

    def by_id(self, ident: int) -> Formula:
        return self._items[ident]

    def atom(self, name: str) -> Formula:
        f = self._atoms.get(name)
        if f is not None:
            return f
        _check_name(name)
        with self._lock:
            f = self._atoms.get(name)
            if f is None:
                f = Formula(len(self._items), name, None, None, 1, self)
                self._items.append(f)
                self._atoms[name] = f
            return f

    def implication(self, lhs: Formula, rhs: Formula) -> Formula:
        key = (lhs.id, rhs.id)
        f = self._imps.get(key)
        if f is not None:
            return f
        with self._lock:
            f = self._imps.get(key)
            if f is None:
                f = Formula(len(self._items), None, lhs, rhs,
                            lhs.weight + rhs.weight + 1, self)
                self._items.append(f)
                self._imps[key] = f
            return f

    def subformulas(self, f: Formula) -> frozenset:
        """All subterms of ``f``, including ``f`` itself."""
        cached = self._sub_cache.get(f.id)
        if cached is not None:
            return cached
        out: set[Formula] = set()
        stack = [f]
        while stack:
            g = stack.pop()
            if g in out:
                continue
            hit = self._sub_cache.get(g.id)
            if hit is not None:
                out |= hit
                continue
            out.add(g)
            if g.is_implication:
                stack.append(g.lhs)
                stack.append(g.rhs)
        result = frozenset(out)
        self._sub_cache[f.id] = result
        return result

    def variables(self, f: Formula) -> frozenset:
        """Names of the variables occurring in ``f``."""
        cached = self._var_cache.get(f.id)
        if cached is not None:
            return cached
        result = frozenset(g.name for g in self.subformulas(f) if g.is_atom)
        self._var_cache[f.id] = result
        return result


# --- the full propositional language -------------------------------------

KIND_ATOM = "atom"
KIND_FALSE = "false"
KIND_AND = "and"
KIND_OR = "or"
KIND_IMP = "imp"

_BINARY_KINDS = (KIND_AND, KIND_OR, KIND_IMP)


class FullFormula:
    """A propositional formula over ``&``, ``|``, ``->``, and ``false``.

    Interned like :class:`Formula`; ``weight`` counts one unit per atom
    occurrence, per ``false`` occurrence, and per connective.
    """

    __slots__ = ("id", "kind", "name", "lhs", "rhs", "weight")

    def __init__(self, ident: int, kind: str, name: Optional[str],
                 lhs: Optional["FullFormula"], rhs: Optional["FullFormula"],
                 weight: int):
        self.id = ident
        self.kind = kind
        self.name = name
        self.lhs = lhs
        self.rhs = rhs
        self.weight = weight

    @property
    def is_atom(self) -> bool:
        return self.kind == KIND_ATOM

    @property
    def is_compound(self) -> bool:
        return self.kind in _BINARY_KINDS

    def __str__(self) -> str:
        return format_full_formula(self)

    def __repr__(self) -> str:
        return format_full_formula(self)


class FullFormulaTable:
    """Hash-consing table for full propositional formulas."""

    def __init__(self) -> None:
        self._atoms: dict[str, FullFormula] = {}
        self._nodes: dict[tuple, FullFormula] = {}
        self._items: list[FullFormula] = []
        self._false: Optional[FullFormula] = None
        self._lock = threading.Lock()

    def __len__(self) -> int:
        return len(self._items)

    def by_id(self, ident: int) -> FullFormula:
        return self._items[ident]

    def atom(self, name: str) -> FullFormula:
        f = self._atoms.get(name)
        if f is not None:
            return f
        _check_name(name)
        with self._lock:
            f = self._atoms.get(name)
            if f is None:
                f = FullFormula(len(self._items), KIND_ATOM, name, None, None, 1)
                self._items.append(f)
                self._atoms[name] = f
            return f

    def falsum(self) -> FullFormula:
        if self._false is None:
            with self._lock:
                if self._false is None:
                    self._false = FullFormula(len(self._items), KIND_FALSE,
                                              None, None, None, 1)
                    self._items.append(self._false)
        return self._false

    def _binary(self, kind: str, lhs: FullFormula, rhs: FullFormula) -> FullFormula:
        key = (kind, lhs.id, rhs.id)
        f = self._nodes.get(key)
        if f is not None:
            return f
        with self._lock:
            f = self._nodes.get(key)
            if f is None:
                f = FullFormula(len(self._items), kind, None, lhs, rhs,
                                lhs.weight + rhs.weight + 1)
                self._items.append(f)
                self._nodes[key] = f
            return f

    def conj(self, lhs: FullFormula, rhs: FullFormula) -> FullFormula:
        return self._binary(KIND_AND, lhs, rhs)

    def disj(self, lhs: FullFormula, rhs: FullFormula) -> FullFormula:
        return self._binary(KIND_OR, lhs, rhs)

    def implication(self, lhs: FullFormula, rhs: FullFormula) -> FullFormula:
        return self._binary(KIND_IMP, lhs, rhs)

    def subformulas_in_order(self, f: FullFormula) -> list[FullFormula]:
        """Distinct subterms of ``f`` in left-to-right postorder."""
        seen: set[int] = set()
        out: list[FullFormula] = []
        stack: list[tuple[FullFormula, bool]] = [(f, False)]
        while stack:
            g, expanded = stack.pop()
            if g.id in seen:
                continue
            if expanded or not g.is_compound:
                seen.add(g.id)
                out.append(g)
            else:
                stack.append((g, True))
                stack.append((g.rhs, False))
                stack.append((g.lhs, False))
        return out

    def variables(self, f: FullFormula) -> frozenset:
        return frozenset(g.name for g in self.subformulas_in_order(f)
                         if g.is_atom)


# --- formatting -----------------------------------------------------------

def format_formula(f: Formula) -> str:
    """Render with "->" right-associative; left operands parenthesized."""
    parts = []
    cur = f
    while cur.is_implication:
        parts.append(cur.lhs)
        cur = cur.rhs
    rendered = ["(" + format_formula(p) + ")" if p.is_implication else p.name
                for p in parts]
    rendered.append(cur.name)
    return "->".join(rendered)


_PREC = {KIND_IMP: 0, KIND_OR: 1, KIND_AND: 2, KIND_ATOM: 3, KIND_FALSE: 3}


def format_full_formula(f: FullFormula) -> str:
    """Render with precedence & > | > -> ; & and | associate left."""
    if f.kind == KIND_ATOM:
        return f.name
    if f.kind == KIND_FALSE:
        return "false"
    if f.kind == KIND_IMP:
        parts = []
        cur = f
        while cur.kind == KIND_IMP:
            parts.append(cur.lhs)
            cur = cur.rhs
        rendered = []
        for p in parts:
            text = format_full_formula(p)
            rendered.append("(" + text + ")" if p.kind == KIND_IMP else text)
        rendered.append(format_full_formula(cur))
        return "->".join(rendered)
    op = "&" if f.kind == KIND_AND else "|"
    # left-associative chains flatten on the left
    parts = []
    cur = f
    while cur.kind == f.kind:
        parts.append(cur.rhs)
        cur = cur.lhs
    parts.append(cur)
    parts.reverse()
    rendered = [_wrap(parts[0], f.kind, left=False)]
    rendered += [_wrap(p, f.kind, left=True) for p in parts[1:]]
    return op.join(rendered)


def _wrap(child: FullFormula, parent_kind: str, left: bool) -> str:
    text = format_full_formula(child)
    cp, pp = _PREC[child.kind], _PREC[parent_kind]
    if cp < pp or (cp == pp and left and child.kind != KIND_ATOM
                   and parent_kind != KIND_IMP):
        return "(" + text + ")"
    return text


# --- lexing and parsing ---------------------------------------------------

@dataclass(frozen=True)
class _Token:
    kind: str  # NAME ARROW LPAREN RPAREN AND OR COMMA THEN END
    text: str
    pos: int


def _tokenize(text: str, offset: int = 0) -> list[_Token]:
    toks: list[_Token] = []
    i, n = 0, len(text)
    while i < n:
        c = text[i]
        if c in " \t\r\n":
            i += 1
            continue
        if c == "(":
            toks.append(_Token("LPAREN", c, offset + i)); i += 1
        elif c == ")":
            toks.append(_Token("RPAREN", c, offset + i)); i += 1
        elif c == "&":
            toks.append(_Token("AND", c, offset + i)); i += 1
        elif c == "|":
            toks.append(_Token("OR", c, offset + i)); i += 1
        elif c == ",":
            toks.append(_Token("COMMA", c, offset + i)); i += 1
        elif c == "-":
            if i + 1 < n and text[i + 1] == ">":
                toks.append(_Token("ARROW", "->", offset + i)); i += 2
            else:
                raise ParseError("stray '-' (expected '->')", offset + i)
        elif c == "=":
            if i + 1 < n and text[i + 1] == ">":
                toks.append(_Token("THEN", "=>", offset + i)); i += 2
            else:
                raise ParseError("stray '=' (expected '=>')", offset + i)
        elif c in NAME_CHARS:
            j = i
            while j < n and text[j] in NAME_CHARS:
                j += 1
            toks.append(_Token("NAME", text[i:j], offset + i))
            i = j
        else:
            raise ParseError(f"unexpected character {c!r}", offset + i)
    toks.append(_Token("END", "", offset + n))
    return toks


class _Parser:
    def __init__(self, tokens: list[_Token]):
        self.tokens = tokens
        self.i = 0

    def peek(self) -> _Token:
        return self.tokens[self.i]

    def take(self) -> _Token:
        t = self.tokens[self.i]
        self.i += 1
        return t

    def expect(self, kind: str, what: str) -> _Token:
        t = self.peek()
        if t.kind != kind:
            raise ParseError(f"expected {what}", t.pos)
        return self.take()

    # implicational core
    def formula(self, table: FormulaTable) -> Formula:
        parts = [self.operand(table)]
        while self.peek().kind == "ARROW":
            self.take()
            parts.append(self.operand(table))
        result = parts[-1]
        for p in reversed(parts[:-1]):
            result = table.implication(p, result)
        return result

    def operand(self, table: FormulaTable) -> Formula:
        t = self.peek()
        if t.kind == "NAME":
            if t.text in RESERVED_WORDS:
                raise ParseError(f"reserved word {t.text!r}", t.pos)
            self.take()
            return table.atom(t.text)
        if t.kind == "LPAREN":
            self.take()
            inner = self.formula(table)
            self.expect("RPAREN", "')'")
            return inner
        raise ParseError("expected a formula", t.pos)

    # full language: -> right-assoc, precedence & > | > ->
    def full(self, table: FullFormulaTable) -> FullFormula:
        parts = [self.full_or(table)]
        while self.peek().kind == "ARROW":
            self.take()
            parts.append(self.full_or(table))
        result = parts[-1]
        for p in reversed(parts[:-1]):
            result = table.implication(p, result)
        return result

    def full_or(self, table: FullFormulaTable) -> FullFormula:
        acc = self.full_and(table)
        while self.peek().kind == "OR":
            self.take()
            acc = table.disj(acc, self.full_and(table))
        return acc

    def full_and(self, table: FullFormulaTable) -> FullFormula:
        acc = self.full_unit(table)
        while self.peek().kind == "AND":
            self.take()
            acc = table.conj(acc, self.full_unit(table))
        return acc

    def full_unit(self, table: FullFormulaTable) -> FullFormula:
        t = self.peek()
        if t.kind == "NAME":
            self.take()
            if t.text == "false":
                return table.falsum()
            return table.atom(t.text)
        if t.kind == "LPAREN":
            self.take()
            inner = self.full(table)
            self.expect("RPAREN", "')'")
            return inner
        raise ParseError("expected a formula", t.pos)


# --- sequents -------------------------------------------------------------

@dataclass(frozen=True)
class Sequent:
    """A multiset antecedent paired with one succedent formula.

    The antecedent tuple is kept sorted by formula id, so equal multisets
    compare equal and the pair is directly usable as a memo key.
    """

    antecedent: tuple[Formula, ...]
    succedent: Formula

    @property
    def weight(self) -> int:
        return sum(f.weight for f in self.antecedent) + self.succedent.weight + 1

    def key(self) -> tuple:
        return (tuple(f.id for f in self.antecedent), self.succedent.id)

    def __str__(self) -> str:
        left = ", ".join(format_formula(f) for f in self.antecedent)
        return f"{left} => {format_formula(self.succedent)}" if left \
            else f"=> {format_formula(self.succedent)}"

    def __repr__(self) -> str:
        return str(self)


def sequent(antecedent: Iterable[Formula], succedent: Formula) -> Sequent:
    return Sequent(tuple(sorted(antecedent, key=lambda f: f.id)), succedent)


# --- module-level default tables and helpers ------------------------------

TABLE = FormulaTable()
FULL_TABLE = FullFormulaTable()


def atom(name: str, table: FormulaTable = None) -> Formula:
    return (TABLE if table is None else table).atom(name)


def imp(lhs: Formula, rhs: Formula, table: FormulaTable = None) -> Formula:
    return (lhs.owner if table is None else table).implication(lhs, rhs)


def parse_formula(text: str, table: FormulaTable = None) -> Formula:
    parser = _Parser(_tokenize(text))
    result = parser.formula(TABLE if table is None else table)
    end = parser.peek()
    if end.kind != "END":
        raise ParseError("unexpected trailing input", end.pos)
    return result


def parse_full_formula(text: str, table: FullFormulaTable = None) -> FullFormula:
    parser = _Parser(_tokenize(text))
    result = parser.full(FULL_TABLE if table is None else table)
    end = parser.peek()
    if end.kind != "END":
        raise ParseError("unexpected trailing input", end.pos)
    return result


def parse_sequent(text: str, table: FormulaTable = None) -> Sequent:
    if text.count("=>") != 1:
        raise ParseError("a sequent needs exactly one '=>'", len(text))
    left, right = text.split("=>", 1)
    succ = _parse_part(right, len(left) + 2, table)
    ante: list[Formula] = []
    pos = 0
    if left.strip():
        for piece in left.split(","):
            ante.append(_parse_part(piece, pos, table))
            pos += len(piece) + 1
    return sequent(ante, succ)


def _parse_part(piece: str, offset: int, table: FormulaTable = None) -> Formula:
    parser = _Parser(_tokenize(piece, offset))
    result = parser.formula(TABLE if table is None else table)
    end = parser.peek()
    if end.kind != "END":
        raise ParseError("unexpected trailing input", end.pos)
    return result


def subformulas(f: Formula, table: FormulaTable = None) -> frozenset:
    return (f.owner if table is None else table).subformulas(f)


def variables(f: Formula, table: FormulaTable = None) -> frozenset:
    return (f.owner if table is None else table).variables(f)


def weight(x) -> int:
    """Weight of a formula, sequent, or deduction.

    Every syntactic unit (variable occurrence, connective, falsum) counts
    one; sequents add one for the turnstile; deductions sum their node
    labels plus one per edge (see the deduction classes).
    """
    if isinstance(x, (Formula, FullFormula, Sequent)):
        return x.weight
    w = getattr(x, "weight", None)
    if w is None:
        raise TypeError(f"no weight defined for {type(x).__name__}")
    return w() if callable(w) else w


def iter_implication_chain(f: Formula) -> Iterator[Formula]:
    """Yield the operands of the right-nested implication chain of ``f``.

    For a1 -> (a2 -> (... -> b)) yields a1, a2, ..., and finally b.
    """
    cur = f
    while cur.is_implication:
        yield cur.lhs
        cur = cur.rhs
    yield cur
