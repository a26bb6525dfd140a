import pytest
from hypothesis import given, settings

from conftest import ltlf_formulas, pltlf_formulas, traces
from ltlfdfa import formulas as fm
from ltlfdfa.errors import ParseError
from ltlfdfa.formulas import (Atom, And, Implies, Not, Or, Release, Since,
                              Until, WeakNext, Next, Yesterday, TRUE, FALSE,
                              alphabet, closure, parse, reverse_to_past,
                              to_bnf, to_nnf, to_text)
from ltlfdfa.traces import all_traces, eval_ltlf_at


def test_parse_until():
    assert parse("a U b") == Until(Atom("a"), Atom("b"))


def test_parse_eventually_desugars():
    assert parse("F a") == Until(TRUE, Atom("a"))


def test_parse_globally_desugars():
    assert parse("G a") == Release(FALSE, Atom("a"))


def test_parse_precedence():
    assert parse("a U b & c") == And(Until(Atom("a"), Atom("b")), Atom("c"))
    assert parse("!a U b") == Until(Not(Atom("a")), Atom("b"))
    assert parse("a -> b -> c") == Implies(Atom("a"), Implies(Atom("b"), Atom("c")))
    assert parse("a & b & c") == And(And(Atom("a"), Atom("b")), Atom("c"))
    assert parse("a U b U c") == Until(Atom("a"), Until(Atom("b"), Atom("c")))
    assert parse("X N a") == Next(WeakNext(Atom("a")))


def test_parse_pltlf():
    assert parse("p S q", "pltlf") == Since(Atom("p"), Atom("q"))
    assert parse("Y p", "pltlf") == Yesterday(Atom("p"))
    # no implication node in the past dialect
    assert parse("p -> q", "pltlf") == Or(Not(Atom("p")), Atom("q"))


def test_parse_errors_carry_position():
    with pytest.raises(ParseError) as err:
        parse("a U @")
    assert err.value.position == 4
    with pytest.raises(ParseError):
        parse("a U")
    with pytest.raises(ParseError):
        parse("a b")


def test_parse_dialect_mismatch():
    with pytest.raises(ParseError):
        parse("Y a", "ltlf")
    with pytest.raises(ParseError):
        parse("X a", "pltlf")
    with pytest.raises(ParseError):
        parse("F a", "pltlf")
    with pytest.raises(ValueError):
        parse("a", "wrong")


def test_operator_words_are_reserved():
    with pytest.raises(ParseError):
        parse("U")
    assert parse("Until") == Atom("Until")  # only the bare capital is reserved


@given(ltlf_formulas())
def test_roundtrip_ltlf(phi):
    assert parse(to_text(phi)) == phi
    assert parse(to_text(phi, full_parens=True)) == phi


@given(pltlf_formulas())
def test_roundtrip_pltlf(phi):
    assert parse(to_text(phi), "pltlf") == phi
    assert parse(to_text(phi, full_parens=True), "pltlf") == phi


def test_nnf_examples():
    assert to_nnf(parse("!(a U b)")) == Release(Not(Atom("a")), Not(Atom("b")))
    assert to_nnf(parse("!X a")) == WeakNext(Not(Atom("a")))
    assert to_nnf(parse("!!a")) == Atom("a")
    assert to_nnf(parse("!true")) == FALSE


def _negations_on_atoms_only(phi):
    if isinstance(phi, Not):
        return isinstance(phi.child, Atom)
    return all(_negations_on_atoms_only(c) for c in fm.children(phi))


@given(ltlf_formulas())
def test_nnf_shape(phi):
    assert _negations_on_atoms_only(to_nnf(phi))


_BNF_NODES = (fm.TrueF, fm.FalseF, Atom, Not, And, Or, Next, Until)


def _bnf_nodes_only(phi):
    return isinstance(phi, _BNF_NODES) and all(
        _bnf_nodes_only(c) for c in fm.children(phi))


def test_bnf_examples():
    assert to_bnf(parse("N a")) == Not(Next(Not(Atom("a"))))
    assert to_bnf(parse("a R b")) == Not(Until(Not(Atom("a")), Not(Atom("b"))))
    assert to_bnf(parse("a U b")) == parse("a U b")


@given(ltlf_formulas())
def test_bnf_shape(phi):
    assert _bnf_nodes_only(to_bnf(phi))


@settings(max_examples=60)
@given(ltlf_formulas(max_leaves=5), traces())
def test_normal_forms_preserve_language(phi, rho):
    expected = eval_ltlf_at(rho, phi, 0)
    assert eval_ltlf_at(rho, to_nnf(phi), 0) == expected
    assert eval_ltlf_at(rho, to_bnf(phi), 0) == expected


def test_closure_until():
    cl = closure(parse("a U b"))
    assert cl.members == (Atom("a"), Atom("b"), parse("a U b"))
    assert cl.m == 1 and cl.n == 1


def test_closure_not_eventually():
    cl = closure(parse("!F a"))
    assert set(cl.members) == {TRUE, Atom("a"), parse("F a"), parse("!F a")}
    assert cl.m == 2 and cl.n == 1


def test_closure_conjunction():
    cl = closure(parse("a & b"))
    assert cl.m == 1 and cl.n == 0


@given(ltlf_formulas())
def test_closure_invariants(phi):
    cl = closure(phi)
    members = set(cl.members)
    for theta in cl.members:
        for child in fm.children(theta):
            assert child in members
    assert cl.n <= cl.m <= len(cl.members)
    assert len(members) == len(cl.members)


def test_reverse_to_past_examples():
    assert reverse_to_past(parse("X p")) == Yesterday(Atom("p"))
    assert reverse_to_past(parse("p U q")) == Since(Atom("p"), Atom("q"))
    assert reverse_to_past(parse("(X p) & q")) == And(Yesterday(Atom("p")), Atom("q"))


@given(ltlf_formulas())
def test_reverse_distributes_over_booleans(phi):
    # the reversal of the bnf form maps each boolean node in place
    bnf = to_bnf(phi)
    rev = reverse_to_past(phi)

    def shapes_match(f, p):
        if isinstance(f, (fm.TrueF, fm.FalseF, Atom)):
            return f == p
        if isinstance(f, Not):
            return isinstance(p, Not) and shapes_match(f.child, p.child)
        if isinstance(f, And):
            return isinstance(p, And) and shapes_match(f.left, p.left) and shapes_match(f.right, p.right)
        if isinstance(f, Or):
            return isinstance(p, Or) and shapes_match(f.left, p.left) and shapes_match(f.right, p.right)
        if isinstance(f, Next):
            return isinstance(p, Yesterday) and shapes_match(f.child, p.child)
        if isinstance(f, Until):
            return isinstance(p, Since) and shapes_match(f.left, p.left) and shapes_match(f.right, p.right)
        return False

    assert shapes_match(bnf, rev)


def test_alphabet_sorted():
    assert alphabet(parse("b U (a & c)")) == ("a", "b", "c")
