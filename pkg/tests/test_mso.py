import pytest
from hypothesis import given, settings

from conftest import ltlf_formulas, traces
from ltlfdfa import mso
from ltlfdfa.errors import BudgetExceededError
from ltlfdfa.formulas import alphabet, closure, is_fixpoint, parse, to_nnf
from ltlfdfa.mso import (ALL_CONFIGS, EncodingConfig, _encode_unchecked,
                         encode_mso, eval_sentence_bruteforce,
                         eval_sentence_witness, sentence_text)
from ltlfdfa.traces import MonadicStructure, eval_ltlf_at, make_trace


def test_config_space():
    assert len(ALL_CONFIGS) == 6
    with pytest.raises(ValueError):
        EncodingConfig("bnf", "sloppy", "full")
    with pytest.raises(ValueError):
        EncodingConfig("bnf", "sloppy", "lean")
    with pytest.raises(ValueError):
        EncodingConfig("cnf", "fussy", "full")


def test_atom_sentence_has_no_quantifiers():
    for cfg in ALL_CONFIGS:
        s = encode_mso(parse("p"), cfg)
        assert s.quantified == ()
        assert s.init == mso.Member(mso.SPred("p"), 0)
        assert s.clauses == ()


def test_conjunction_fussy_full_shape():
    s = encode_mso(parse("a & b"), EncodingConfig("bnf", "fussy", "full"))
    assert s.quantifier_count == 1
    (clause,) = s.clauses
    assert isinstance(clause, mso.MIff)
    assert clause.right == mso.mand(
        mso.Member(mso.SPred("a"), 0), mso.Member(mso.SPred("b"), 0))


def test_lean_next_is_a_set_term():
    s = encode_mso(parse("X a"), EncodingConfig("nnf", "fussy", "lean"))
    assert s.quantifier_count == 0
    assert s.init == mso.Member(
        mso.SDiff(mso.SShift(mso.SPred("a")), mso.SLastOnly()), 0)


def test_sloppy_uses_implication():
    s = encode_mso(parse("a & b"), EncodingConfig("nnf", "sloppy", "full"))
    (clause,) = s.clauses
    assert isinstance(clause, mso.MImplies)


def test_window_validation():
    with pytest.raises(ValueError):
        mso.MonadicSentence(("a",), (), mso.Member(mso.SPred("a"), 1), ())
    with pytest.raises(ValueError):
        mso.MonadicSentence(("a",), (), mso.MTrue(),
                            (mso.Member(mso.SPred("a"), 2),))
    with pytest.raises(ValueError):
        mso.MonadicSentence(("a",), (), mso.MTrue(),
                            (mso.Member(mso.SPred("q"), 0),))


def test_bruteforce_examples():
    I = MonadicStructure.from_trace(make_trace(["p"]), ["p"])
    s = encode_mso(parse("p"), EncodingConfig())
    assert eval_sentence_bruteforce(I, s)

    rho = make_trace([], ["a"])
    I2 = MonadicStructure.from_trace(rho, ["a"])
    fussy = encode_mso(parse("!F a"), EncodingConfig("bnf", "fussy", "full"))
    assert not eval_sentence_bruteforce(I2, fussy)
    assert not eval_ltlf_at(rho, parse("!F a"), 0)


def test_sloppy_bnf_counterexample():
    # the forbidden combination admits a model on a non-satisfying trace
    rho = make_trace([], ["a"])
    I = MonadicStructure.from_trace(rho, ["a"])
    bad = _encode_unchecked(parse("!F a"), "bnf", "sloppy", "full")
    assert eval_sentence_bruteforce(I, bad)
    assert not eval_ltlf_at(rho, parse("!F a"), 0)


def test_bruteforce_bit_cap():
    s = encode_mso(parse("(a U b) & (b U a) & X a"), EncodingConfig())
    I = MonadicStructure.from_trace(make_trace(["a"], ["b"], [], ["a"]), ["a", "b"])
    with pytest.raises(BudgetExceededError):
        eval_sentence_bruteforce(I, s, bit_cap=8)


def test_witness_examples():
    rho = make_trace(["a"])
    cfg = EncodingConfig()
    assert eval_sentence_witness(rho, parse("a"), encode_mso(parse("a"), cfg), cfg)

    rho = make_trace(["a"], ["a"])
    cfg = EncodingConfig("bnf", "fussy", "full")
    s = encode_mso(parse("G a"), cfg)
    assert eval_sentence_witness(rho, parse("G a"), s, cfg)

    rho = make_trace([], ["a"])
    cfg = EncodingConfig("nnf", "sloppy", "lean")
    s = encode_mso(parse("F a"), cfg)
    assert eval_sentence_witness(rho, parse("F a"), s, cfg)


def test_witness_closure_mismatch():
    cfg = EncodingConfig("bnf", "fussy", "full")
    s = encode_mso(parse("a & b"), cfg)
    with pytest.raises(ValueError):
        eval_sentence_witness(make_trace(["a"]), parse("a U b"), s, cfg)


@settings(max_examples=25, deadline=None)
@given(ltlf_formulas(max_leaves=3), traces(max_len=3))
def test_bruteforce_matches_semantics(phi, rho):
    expected = eval_ltlf_at(rho, phi, 0)
    I = MonadicStructure.from_trace(rho, alphabet(phi))
    for cfg in ALL_CONFIGS:
        s = encode_mso(phi, cfg, alphabet(phi))
        if s.quantifier_count * len(rho) > 14:
            continue
        assert eval_sentence_bruteforce(I, s) == expected, cfg.name


@settings(max_examples=60, deadline=None)
@given(ltlf_formulas(max_leaves=5), traces())
def test_witness_soundness(phi, rho):
    # satisfying traces always satisfy the sentence under canonical extents
    if not eval_ltlf_at(rho, phi, 0):
        return
    for cfg in ALL_CONFIGS:
        s = encode_mso(phi, cfg, alphabet(phi))
        assert eval_sentence_witness(rho, phi, s, cfg), cfg.name


def test_lean_term_pointwise():
    # membership in the evaluated lean term (under canonical fixpoint
    # extents) equals the subformula's truth, position by position
    rho = make_trace(["a"], [], ["a", "b"])
    for text in ("X a", "N a", "!a", "a & b", "a | b", "a U b", "a R b", "true", "false"):
        phi = to_nnf(parse(text))
        cfg = EncodingConfig("nnf", "fussy", "lean")
        s = encode_mso(phi, cfg, ("a", "b"))
        extents = mso.canonical_extents(rho, phi, cfg)
        struct = MonadicStructure.from_trace(rho, ("a", "b")).extended(extents)
        init = s.init
        assert isinstance(init, mso.Member)
        for x in range(len(rho)):
            assert mso.member_at(init.term, x, struct) == eval_ltlf_at(rho, phi, x), text


def test_quantifier_economy():
    for text in ("X a", "a & (b U a)", "F a", "!(a)", "a U b"):
        phi = parse(text)
        full = encode_mso(phi, EncodingConfig("nnf", "fussy", "full"))
        lean = encode_mso(phi, EncodingConfig("nnf", "fussy", "lean"))
        assert lean.quantifier_count <= full.quantifier_count
        cl = closure(to_nnf(phi))
        only_fixpoints = all(is_fixpoint(t) for t in cl.non_atomic)
        assert (lean.quantifier_count == full.quantifier_count) == only_fixpoints
    # strict on a formula with a non-fixpoint non-atomic subformula
    full = encode_mso(parse("X a"), EncodingConfig("nnf", "fussy", "full"))
    lean = encode_mso(parse("X a"), EncodingConfig("nnf", "fussy", "lean"))
    assert lean.quantifier_count < full.quantifier_count


def test_sentence_text_smoke():
    s = encode_mso(parse("a & b"), EncodingConfig("bnf", "fussy", "full"))
    text = sentence_text(s)
    assert "exists2" in text and "init:" in text and "all x:" in text
