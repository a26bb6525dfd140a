import sys
from pathlib import Path

import hypothesis.strategies as st

sys.path.insert(0, str(Path(__file__).parent))

from ltlfdfa import formulas as fm

ATOMS = ("a", "b")


def ltlf_formulas(atoms=ATOMS, max_leaves=8):
    leaves = st.sampled_from([fm.TRUE, fm.FALSE] + [fm.Atom(a) for a in atoms])

    def extend(children):
        unary = st.builds(
            lambda op, c: op(c),
            st.sampled_from((fm.Not, fm.Next, fm.WeakNext)), children)
        binary = st.builds(
            lambda op, l, r: op(l, r),
            st.sampled_from((fm.And, fm.Or, fm.Implies, fm.Until, fm.Release)),
            children, children)
        return st.one_of(unary, binary)

    return st.recursive(leaves, extend, max_leaves=max_leaves)


def pltlf_formulas(atoms=ATOMS, max_leaves=8):
    leaves = st.sampled_from([fm.TRUE, fm.FALSE] + [fm.Atom(a) for a in atoms])

    def extend(children):
        unary = st.builds(
            lambda op, c: op(c), st.sampled_from((fm.Not, fm.Yesterday)), children)
        binary = st.builds(
            lambda op, l, r: op(l, r),
            st.sampled_from((fm.And, fm.Or, fm.Since)), children, children)
        return st.one_of(unary, binary)

    return st.recursive(leaves, extend, max_leaves=max_leaves)


def traces(atoms=ATOMS, max_len=4):
    letter = st.frozensets(st.sampled_from(atoms))
    return st.lists(letter, min_size=1, max_size=max_len).map(tuple)
