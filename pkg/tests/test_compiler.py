import pytest
from hypothesis import given, settings

from conftest import ltlf_formulas, traces
from ltlfdfa import mso
from ltlfdfa.automata import accepts, minimal_size_oracle
from ltlfdfa.compiler import compile_sentence, compile_with_stats, lower
from ltlfdfa.errors import BudgetExceededError
from ltlfdfa.formulas import alphabet, parse
from ltlfdfa.mso import ALL_CONFIGS, EncodingConfig, encode_mso
from ltlfdfa.traces import all_traces, eval_ltlf_at


def test_compile_atom_is_three_states():
    dfa = compile_sentence(encode_mso(parse("p"), EncodingConfig()))
    assert dfa.n_states == 3
    assert dfa.n_states == minimal_size_oracle(dfa)


def test_compile_eventually_all_variations_agree():
    dfas = [
        compile_sentence(encode_mso(parse("F a"), cfg)) for cfg in ALL_CONFIGS
    ]
    assert all(d == dfas[0] for d in dfas)
    assert dfas[0].n_states == 2


def test_lean_nested_shift_columns():
    # X X a in lean form needs a derived column per shift depth
    cfg = EncodingConfig("nnf", "fussy", "lean")
    sentence = encode_mso(parse("X X a"), cfg)
    low = lower(sentence)
    assert sum(1 for p in low.preds if p.startswith("$C")) == 2
    dfa = compile_sentence(sentence)
    for rho in all_traces(["a"], 4):
        assert accepts(dfa, rho) == eval_ltlf_at(rho, parse("X X a"), 0)


def test_empty_alphabet():
    dfa = compile_sentence(encode_mso(parse("true"), EncodingConfig()))
    assert dfa.atoms == ()
    assert dfa.n_states == 1
    assert accepts(dfa, ((frozenset()),))


def test_width_cap():
    sentence = encode_mso(parse("(a U b) & (b U a)"), EncodingConfig())
    with pytest.raises(BudgetExceededError):
        compile_sentence(sentence, width_cap=2)


def test_state_cap():
    sentence = encode_mso(parse("a U b"), EncodingConfig())
    with pytest.raises(BudgetExceededError):
        compile_sentence(sentence, state_cap=2)


def test_malformed_window():
    bad = mso.MonadicSentence(
        ("a",), ("$0",), mso.MTrue(),
        (mso.mand(mso.Member(mso.SPred("$0"), -1), mso.Member(mso.SPred("a"), 1)),))
    with pytest.raises(ValueError):
        compile_sentence(bad)


def test_column_order_independence():
    # permuting the quantified predicate order leaves the language alone
    cfg = EncodingConfig("bnf", "fussy", "full")
    sentence = encode_mso(parse("(a U b) | X a"), cfg)
    permuted = mso.MonadicSentence(
        sentence.atoms, tuple(reversed(sentence.quantified)), sentence.init,
        sentence.clauses, sentence.labels)
    assert compile_sentence(sentence) == compile_sentence(permuted)


def test_stats():
    dfa, stats = compile_with_stats(encode_mso(parse("F a"), EncodingConfig()))
    assert stats.final_states == dfa.n_states == 2
    assert stats.spec_width == 2  # the atom plus one quantified predicate
    assert stats.width >= stats.spec_width
    assert stats.det_states >= stats.final_states
    # the conceptual previous-letter machine bound
    assert stats.det_states <= 2 ** (2 ** stats.width) + 1


@settings(max_examples=40, deadline=None)
@given(ltlf_formulas(max_leaves=4))
def test_end_to_end_language(phi):
    expected = {
        rho: eval_ltlf_at(rho, phi, 0)
        for rho in all_traces(alphabet(phi), 3)
    }
    for cfg in ALL_CONFIGS:
        dfa = compile_sentence(encode_mso(phi, cfg, alphabet(phi)))
        for rho, want in expected.items():
            assert accepts(dfa, rho) == want, cfg.name
