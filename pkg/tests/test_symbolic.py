import pytest
from hypothesis import given, settings

from conftest import pltlf_formulas, traces
from ltlfdfa.automata import accepts, minimize
from ltlfdfa.bdd import ONE, ZERO, BddStore
from ltlfdfa.errors import BudgetExceededError
from ltlfdfa.formulas import alphabet, closure, parse
from ltlfdfa.symbolic import (SymbolicDfa, compose_acceptance, explicit_to_symbolic,
                              extract_edges, pltlf_to_symbolic_dfa,
                              symbolic_to_explicit)
from ltlfdfa.traces import all_traces, eval_pltlf_at, make_trace
from ltlfdfa.pipelines import translate


def test_atom_machine_has_two_bits():
    sdfa = pltlf_to_symbolic_dfa(parse("p", "pltlf"))
    assert sdfa.k == 2  # the p bit plus the at-start bit
    explicit = symbolic_to_explicit(sdfa)
    for rho in all_traces(["p"], 3):
        assert accepts(explicit, rho) == ("p" in rho[-1])


def test_yesterday_language():
    sdfa = pltlf_to_symbolic_dfa(parse("Y p", "pltlf"))
    explicit = symbolic_to_explicit(sdfa)
    for rho in all_traces(["p"], 3):
        expected = len(rho) >= 2 and "p" in rho[-2]
        assert accepts(explicit, rho) == expected


def test_since_reachable_bound():
    psi = parse("p S q", "pltlf")
    sdfa = pltlf_to_symbolic_dfa(psi)
    explicit = symbolic_to_explicit(sdfa)
    assert explicit.n_states <= 2 ** len(closure(psi).members) + 1


def test_rejects_empty_word():
    sdfa = pltlf_to_symbolic_dfa(parse("true", "pltlf"))
    assert not sdfa.is_accepting(sdfa.x0)


@settings(max_examples=50, deadline=None)
@given(pltlf_formulas(max_leaves=5), traces())
def test_language_matches_past_semantics(psi, rho):
    sdfa = pltlf_to_symbolic_dfa(psi, alphabet(psi))
    explicit = symbolic_to_explicit(sdfa)
    rho = tuple(frozenset(l & set(alphabet(psi))) for l in rho)
    expected = eval_pltlf_at(rho, psi, len(rho) - 1)
    assert accepts(explicit, rho) == expected
    assert sdfa.accepts_word(rho) == expected


def test_run_trace_invariant():
    sdfa = pltlf_to_symbolic_dfa(parse("p S q", "pltlf"))
    word = make_trace(["q"], ["p"], [])
    states = sdfa.run(word)
    assert states[0] == sdfa.x0
    assert len(states) == len(word) + 1
    letters = [sum(1 << j for j, a in enumerate(sdfa.atoms) if a in l) for l in word]
    for i, letter in enumerate(letters):
        assert states[i + 1] == sdfa.step(states[i], letter)


def test_state_cap():
    sdfa = pltlf_to_symbolic_dfa(parse("p S q", "pltlf"))
    with pytest.raises(BudgetExceededError):
        symbolic_to_explicit(sdfa, state_cap=1)


def test_compose_acceptance_substitution():
    store = BddStore(("x0", "p"))
    sdfa = SymbolicDfa(store, ("p",), ("x0",), 0,
                       {"x0": store.var("p")}, store.var("x0"))
    assert compose_acceptance(sdfa) == store.var("p")
    top = SymbolicDfa(store, ("p",), ("x0",), 0, {"x0": store.var("p")}, ONE)
    assert compose_acceptance(top) == ONE


def test_compose_acceptance_pointwise():
    sdfa = pltlf_to_symbolic_dfa(parse("p S q", "pltlf"))
    bfp = compose_acceptance(sdfa)
    n_atoms = len(sdfa.atoms)
    for mask in range(1 << sdfa.k):
        for letter in range(1 << n_atoms):
            bits = [bool(mask >> i & 1) for i in range(sdfa.k)]
            bits += [bool(letter >> j & 1) for j in range(n_atoms)]
            assert sdfa.store.evaluate_levels(bfp, bits) == sdfa.is_accepting(
                sdfa.step(mask, letter))


def test_extract_edges_single_variable():
    store = BddStore(("v",))
    tables = extract_edges([store.var("v")], store)
    assert tables.u == 1
    assert tables.roots == (("node", 1),)
    assert tables.pre_t(0, 1) == [(1, "v", 1)]
    assert tables.pre_t(0, 0) == [(1, "v", 0)]
    assert tables.pre(1) == []
    assert tables.post(1) == []


def test_extract_edges_diamond():
    # v0 branching into a shared v1 node: within one root the node appears
    # once, with both parent edges in its Pre set
    store = BddStore(("v0", "v1"))
    v1 = store.var("v1")
    diamond = store.mk(0, v1, v1)  # reduced away: build an almost-diamond
    f = store.ite(store.var("v0"), v1, store.not_(v1))
    tables = extract_edges([f], store)
    assert tables.u == 3
    shared = [nd for nd in tables.nodes if nd.var == "v1"]
    assert len(shared) == 2  # two distinct v1 functions, not a shared copy
    g = store.or_(store.and_(store.var("v0"), v1), store.and_(store.not_(store.var("v0")), v1))
    assert g == v1  # truly shared nodes collapse before extraction


def test_extract_edges_duplicates_across_roots():
    store = BddStore(("v",))
    v = store.var("v")
    tables = extract_edges([v, v], store)
    assert tables.u == 2
    assert tables.roots == (("node", 1), ("node", 2))
    assert {nd.root_index for nd in tables.nodes} == {0, 1}
    assert tables.edge_count == 4
    assert "root 0" in tables.dump()


def test_extract_edges_terminal_root():
    store = BddStore(("v",))
    tables = extract_edges([ZERO, store.var("v"), ONE], store)
    assert tables.roots[0] == ("term", 0)
    assert tables.roots[2] == ("term", 1)
    assert tables.u == 1


def test_explicit_to_symbolic_roundtrip():
    for text in ("a", "F a", "G(a -> X b)", "a U b"):
        d = translate(parse(text), "reverse").dfa
        sdfa = explicit_to_symbolic(d)
        back = symbolic_to_explicit(sdfa)
        assert minimize(back) == d
        assert sdfa.k == max(1, (d.n_states - 1).bit_length())
