import pytest
from hypothesis import given, strategies as st

from mindag.formulas import (
    FormulaError,
    FormulaTable,
    FULL_TABLE,
    ParseError,
    TABLE,
    atom,
    format_formula,
    imp,
    parse_formula,
    parse_full_formula,
    parse_sequent,
    sequent,
    subformulas,
    variables,
    weight,
)


def test_interning_returns_identical_objects():
    a = atom("p")
    assert a is atom("p")
    assert imp(a, a) is imp(atom("p"), atom("p"))


def test_weight_counts_symbols():
    p, q = atom("p"), atom("q")
    assert p.weight == 1
    assert imp(p, q).weight == 3
    assert imp(imp(p, q), p).weight == 5


def test_parse_format_round_trip_examples():
    for text in ["p", "p->q", "p->q->r", "(p->q)->r", "((p->q)->p)->p"]:
        f = parse_formula(text)
        assert parse_formula(format_formula(f)) is f


def test_format_is_right_associative_minimal_parens():
    p, q, r = atom("p"), atom("q"), atom("r")
    assert format_formula(imp(p, imp(q, r))) == "p->q->r"
    assert format_formula(imp(imp(p, q), r)) == "(p->q)->r"


def test_parse_error_carries_offset():
    with pytest.raises(ParseError) as err:
        parse_formula("p->(q")
    assert "offset 5" in str(err.value)


def test_bad_variable_names_rejected():
    with pytest.raises(FormulaError):
        TABLE.atom("")
    with pytest.raises(FormulaError):
        TABLE.atom("has space")
    with pytest.raises(FormulaError):
        TABLE.atom("false")  # reserved for the falsum constant


def test_sequent_antecedent_is_canonically_sorted():
    s1 = parse_sequent("q, p => r")
    s2 = parse_sequent("p, q => r")
    assert s1.key() == s2.key()
    assert str(s1) == str(s2)


def test_sequent_weight():
    s = parse_sequent("p, p->q => q")
    assert s.weight == 1 + 3 + 1 + 1


def test_sequent_keeps_duplicates():
    s = parse_sequent("p, p => q")
    assert len(s.antecedent) == 2


def test_subformulas_and_variables():
    f = parse_formula("(p->q)->p")
    names = {g for g in variables(f)}
    assert names == {"p", "q"}
    subs = subformulas(f)
    assert parse_formula("p->q") in subs and f in subs


def test_separate_tables_are_independent():
    t = FormulaTable()
    a = t.atom("p")
    assert a is not atom("p")
    assert a.name == "p"


def test_full_formula_parse_and_format():
    f = parse_full_formula("a&b|c")
    assert str(f) == "a&b|c"
    g = parse_full_formula("a->b->false")
    assert g.kind == "imp"
    assert FULL_TABLE.falsum().weight == 1


_names = st.sampled_from(["p", "q", "r", "s"])


@st.composite
def _formulas(draw, depth=4):
    if depth == 0 or draw(st.booleans()):
        return atom(draw(_names))
    return imp(draw(_formulas(depth=depth - 1)),
               draw(_formulas(depth=depth - 1)))


@given(_formulas())
def test_round_trip_property(f):
    assert parse_formula(format_formula(f)) is f


@given(_formulas())
def test_weight_equals_symbol_count(f):
    atoms_n, arrows_n = _count(f)
    assert weight(f) == atoms_n + arrows_n


def _count(f):
    if f.lhs is None:
        return 1, 0
    la, lr = _count(f.lhs)
    ra, rr = _count(f.rhs)
    return la + ra, lr + rr + 1


def test_operand_helpers_stay_in_the_owning_table():
    mine = FormulaTable()
    p = mine.atom("p")
    q = mine.atom("q")
    pq = imp(p, q)  # no table argument: must follow the operands
    assert pq is mine.implication(p, q)
    assert pq.owner is mine
    assert variables(pq) == {"p", "q"}
    assert subformulas(pq) == {p, q, pq}
    assert TABLE.atom("p") is not p
