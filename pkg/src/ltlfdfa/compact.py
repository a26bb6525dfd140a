"""Second-order sentences that run a symbolic DFA backwards over the word.

Quantified predicates: one V per state bit (where that bit holds along the
reversed run) and one N per duplicated BDD node (where that node is visited
while computing the transition).  Conjunct families, in emission order:

  Rinit      at the last position the initial assignment holds;
  node       visited nodes came from a matching parent (PreCon, fussy only)
             and push the branch picked by the labels (PostCon);
  Rterminal  a terminal edge taken in bit q's BDD writes bit q at x-1;
  Racc       at position 0 the acceptance-composition BDD must reach
             terminal 1 (fussy) / must not reach terminal 0 (sloppy);
  roots      every BDD's root is visited at every position.

Constant BDDs have no nodes or edges, so they get degenerate clauses: a
constant bit BDD pins V_q at x-1 directly, and a constant acceptance BDD
turns Racc into a constant.  The roots family covers the acceptance BDD as
well; without it nothing would force its computation path under the sloppy
flavor.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import mso
from .mso import (Guard, MAnd, Member, MExpr, MFalse, MImplies, MNot, MOr,
                  MTrue, MonadicSentence, SPred, mand, mor)
from .symbolic import EdgeTables, SymbolicDfa, compose_acceptance, extract_edges
from .traces import Trace, reverse_trace


def _vname(q: int) -> str:
    return f"$V{q}"


def _nname(alpha: int) -> str:
    return f"$N{alpha}"


@dataclass
class RevSentence:
    sentence: MonadicSentence
    flavor: str
    k: int
    u: int
    edge_count: int
    family_sizes: dict[str, int]
    tables: EdgeTables

    @property
    def quantifier_count(self) -> int:
        return self.k + self.u

    @property
    def clause_count(self) -> int:
        return self.sentence.clause_count

    def pretty(self) -> str:
        lines = []
        i = 0
        for family in ("Rinit", "node", "Rterminal", "Racc", "roots"):
            for _ in range(self.family_sizes[family]):
                lines.append(f"{family}: {mso.expr_text(self.sentence.clauses[i])}")
                i += 1
        return "\n".join(lines) + "\n"


def _lit(var_to_pred: dict[str, str], var: str, d: int, offset: int = 0) -> MExpr:
    ref = Member(SPred(var_to_pred.get(var, var)), offset)
    return ref if d else MNot(ref)


def build_rev(sdfa: SymbolicDfa, flavor: str = "fussy",
              tables: EdgeTables | None = None) -> RevSentence:
    """The reversal sentence of the symbolic DFA; its models are exactly the
    reversals of the automaton's nonempty accepted words."""
    if flavor not in ("fussy", "sloppy"):
        raise ValueError(f"flavor must be fussy or sloppy, got {flavor!r}")
    if tables is None:
        bfp = compose_acceptance(sdfa)
        tables = extract_edges(
            [sdfa.eta[q] for q in sdfa.state_vars] + [bfp], sdfa.store)
    k = sdfa.k
    acc_index = k  # the acceptance-composition BDD is the last root
    var_to_pred = {var: _vname(q) for q, var in enumerate(sdfa.state_vars)}

    rinit: list[MExpr] = []
    for q in range(k):
        d = sdfa.x0 >> q & 1
        rinit.append(MImplies(Guard("last"), _lit(var_to_pred, sdfa.state_vars[q], d)))

    node: list[MExpr] = []
    for nd in tables.nodes:
        here = Member(SPred(_nname(nd.alpha)))
        if flavor == "fussy":
            parents = tables.pre(nd.alpha)
            if parents:  # roots have no parents; the roots family covers them
                node.append(MImplies(here, mor(*(
                    mand(Member(SPred(_nname(beta))), _lit(var_to_pred, v, d))
                    for beta, v, d in parents
                ))))
        for beta, v, d in tables.post(nd.alpha):
            node.append(MImplies(mand(here, _lit(var_to_pred, v, d)),
                                 Member(SPred(_nname(beta)))))

    rterminal: list[MExpr] = []
    for q in range(k):
        ref = tables.roots[q]
        target = lambda c, q=q: _lit({}, _vname(q), c, offset=-1)
        if ref[0] == "term":
            # a constant transition BDD pins the bit with no edge to hang on
            rterminal.append(MImplies(Guard("positive"), target(ref[1])))
            continue
        for nd in tables.nodes:
            if nd.root_index != q:
                continue
            for side, d in ((nd.low, 0), (nd.high, 1)):
                if side[0] == "term":
                    rterminal.append(MImplies(
                        mand(Guard("positive"), Member(SPred(_nname(nd.alpha))),
                             _lit(var_to_pred, nd.var, d)),
                        target(side[1]),
                    ))

    racc: list[MExpr] = []
    acc_ref = tables.roots[acc_index]
    if acc_ref[0] == "term":
        racc.append(MImplies(Guard("first"), MTrue() if acc_ref[1] else MFalse()))
    elif flavor == "fussy":
        ways = [
            mand(Member(SPred(_nname(beta))), _lit(var_to_pred, v, d))
            for beta, v, d in tables.pre_t(acc_index, 1)
        ]
        racc.append(MImplies(Guard("first"), mor(*ways) if ways else MFalse()))
    else:
        ways = [
            mand(Member(SPred(_nname(beta))), _lit(var_to_pred, v, d))
            for beta, v, d in tables.pre_t(acc_index, 0)
        ]
        racc.append(MImplies(mor(*ways) if ways else MFalse(), MNot(Guard("first"))))

    roots: list[MExpr] = [
        Member(SPred(_nname(ref[1]))) for ref in tables.roots if ref[0] == "node"
    ]

    clauses = tuple(rinit + node + rterminal + racc + roots)
    quantified = tuple(_vname(q) for q in range(k)) + tuple(
        _nname(nd.alpha) for nd in tables.nodes)
    labels = {_vname(q): f"bit {sdfa.labels.get(v, v)}"
              for q, v in enumerate(sdfa.state_vars)}
    sentence = MonadicSentence(sdfa.atoms, quantified, MTrue(), clauses, labels)
    family_sizes = {
        "Rinit": len(rinit), "node": len(node), "Rterminal": len(rterminal),
        "Racc": len(racc), "roots": len(roots),
    }
    return RevSentence(sentence, flavor, k, tables.u, tables.edge_count,
                       family_sizes, tables)


def canonical_rev_witness(rho: Trace, sdfa: SymbolicDfa,
                          tables: EdgeTables | None = None) -> dict[str, frozenset[int]]:
    """Extents read off the reversed run: V bits from the state labeling,
    N sets from the BDD paths computed at each position (roots always in)."""
    if tables is None:
        bfp = compose_acceptance(sdfa)
        tables = extract_edges(
            [sdfa.eta[q] for q in sdfa.state_vars] + [bfp], sdfa.store)
    last = len(rho) - 1
    states = sdfa.run(reverse_trace(rho))  # X_0 .. X_e with e = len(rho)
    k = sdfa.k

    v_sets: dict[str, set[int]] = {_vname(q): set() for q in range(k)}
    n_sets: dict[str, set[int]] = {_nname(nd.alpha): set() for nd in tables.nodes}
    for x in range(len(rho)):
        mask = states[last - x]
        values = {sdfa.state_vars[q]: bool(mask >> q & 1) for q in range(k)}
        values.update({a: a in rho[x] for a in sdfa.atoms})
        for q in range(k):
            if values[sdfa.state_vars[q]]:
                v_sets[_vname(q)].add(x)
        for ref in tables.roots:
            cursor = ref
            while cursor[0] == "node":
                nd = tables.node(cursor[1])
                n_sets[_nname(nd.alpha)].add(x)
                cursor = nd.high if values[nd.var] else nd.low
    out = {name: frozenset(s) for name, s in v_sets.items()}
    out.update({name: frozenset(s) for name, s in n_sets.items()})
    return out
