"""Symbolic DFAs over boolean state variables, built from past formulas.

The construction keeps one state bit per member of the past formula's
closure (the member's truth at the last position read) plus one at-start
bit, so the explicit reachable space is single-exponential in the closure.
Update rules: an atom bit tracks the current letter, `Y t` copies the
previous bit of `t`, `t1 S t2` is `t2 or (t1 and previous(t1 S t2))`,
boolean members update pointwise.  Acceptance is the bit of the whole
formula with the at-start bit off, which also rejects the empty word.

`extract_edges` flattens the transition BDDs into the edge tables consumed
by the compact second-order build; structurally shared nodes are duplicated
per root so every node id belongs to exactly one BDD.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from . import formulas as fm
from .automata import ExplicitDfa
from .bdd import ONE, ZERO, BddStore, DEFAULT_NODE_CAP
from .errors import BudgetExceededError
from .traces import Trace

DEFAULT_EXPLICIT_CAP = 1_000_000


@dataclass
class SymbolicDfa:
    store: BddStore
    atoms: tuple[str, ...]
    state_vars: tuple[str, ...]
    x0: int  # bit i of the mask is the initial value of state_vars[i]
    eta: dict[str, int]  # state var -> BDD over state vars and atoms
    f: int  # acceptance BDD over state vars only
    labels: dict[str, str] = field(default_factory=dict)

    @property
    def k(self) -> int:
        return len(self.state_vars)

    def _bits(self, mask: int, letter: int) -> list[bool]:
        bits = [bool(mask >> i & 1) for i in range(self.k)]
        bits.extend(bool(letter >> j & 1) for j in range(len(self.atoms)))
        return bits

    def step(self, mask: int, letter: int) -> int:
        bits = self._bits(mask, letter)
        out = 0
        for i, q in enumerate(self.state_vars):
            if self.store.evaluate_levels(self.eta[q], bits):
                out |= 1 << i
        return out

    def is_accepting(self, mask: int) -> bool:
        bits = [bool(mask >> i & 1) for i in range(self.k)]
        bits.extend(False for _ in self.atoms)
        return self.store.evaluate_levels(self.f, bits)

    def run(self, word: Trace) -> list[int]:
        """State sequence X0..Xe of the run over the word."""
        states = [self.x0]
        for letter_set in word:
            letter = sum(1 << j for j, a in enumerate(self.atoms) if a in letter_set)
            states.append(self.step(states[-1], letter))
        return states

    def accepts_word(self, word: Trace) -> bool:
        if len(word) == 0:
            return False
        return self.is_accepting(self.run(word)[-1])


def pltlf_to_symbolic_dfa(psi: fm.Formula, atom_names=None,
                          node_cap: int = DEFAULT_NODE_CAP) -> SymbolicDfa:
    """Deterministic symbolic automaton for the past formula's language."""
    if not fm.is_pltlf(psi):
        raise TypeError("expected a past-dialect formula")
    atoms = tuple(sorted(atom_names)) if atom_names is not None else fm.alphabet(psi)
    cl = fm.closure(psi)
    members = cl.members
    k = len(members) + 1
    state_vars = tuple(f"x{i}" for i in range(k))
    start_var = state_vars[-1]
    store = BddStore(state_vars + atoms, node_cap=node_cap)
    bit_of = {theta: state_vars[i] for i, theta in enumerate(members)}

    vals: dict[fm.Formula, int] = {}

    def val(theta: fm.Formula) -> int:
        if theta in vals:
            return vals[theta]
        if isinstance(theta, fm.TrueF):
            v = ONE
        elif isinstance(theta, fm.FalseF):
            v = ZERO
        elif isinstance(theta, fm.Atom):
            v = store.var(theta.name)
        elif isinstance(theta, fm.Not):
            v = store.not_(val(theta.child))
        elif isinstance(theta, fm.And):
            v = store.and_(val(theta.left), val(theta.right))
        elif isinstance(theta, fm.Or):
            v = store.or_(val(theta.left), val(theta.right))
        elif isinstance(theta, fm.Yesterday):
            # the initial state is all-zero, so the previous bit is already
            # false at the first position and no at-start correction is needed
            v = store.var(bit_of[theta.child])
        elif isinstance(theta, fm.Since):
            v = store.or_(val(theta.right),
                          store.and_(val(theta.left), store.var(bit_of[theta])))
        else:
            raise TypeError(f"not a past-dialect formula: {theta!r}")
        vals[theta] = v
        return v

    eta = {bit_of[theta]: val(theta) for theta in members}
    eta[start_var] = ZERO
    f = store.and_(store.var(bit_of[psi]), store.nvar(start_var))
    x0 = 1 << (k - 1)
    labels = {bit_of[t]: fm.to_text(t) for t in members}
    labels[start_var] = "<start>"
    return SymbolicDfa(store, atoms, state_vars, x0, eta, f, labels)


def symbolic_to_explicit(sdfa: SymbolicDfa, state_cap: int = DEFAULT_EXPLICIT_CAP,
                         deadline=None) -> ExplicitDfa:
    """Reachable-state expansion; states numbered breadth-first from X0."""
    index = {sdfa.x0: 0}
    order = [sdfa.x0]
    delta: list[tuple[int, ...]] = []
    queue = deque([sdfa.x0])
    n_letters = 1 << len(sdfa.atoms)
    while queue:
        if deadline is not None:
            deadline.check()
        mask = queue.popleft()
        row = []
        for letter in range(n_letters):
            nxt = sdfa.step(mask, letter)
            if nxt not in index:
                if len(index) >= state_cap:
                    raise BudgetExceededError(f"expansion exceeded {state_cap} states")
                index[nxt] = len(index)
                order.append(nxt)
                queue.append(nxt)
            row.append(index[nxt])
        delta.append(tuple(row))
    accepting = frozenset(i for i, m in enumerate(order) if sdfa.is_accepting(m))
    return ExplicitDfa(sdfa.atoms, 0, tuple(delta), accepting)


def compose_acceptance(sdfa: SymbolicDfa) -> int:
    """B_f' = f applied to the transition family: over state vars and atoms,
    true exactly when the step from (state, letter) lands in an accepting state."""
    return sdfa.store.veccompose(sdfa.f, {q: sdfa.eta[q] for q in sdfa.state_vars})


def _table_bdd(store: BddStore, n_vars: int, values: tuple[int, ...]) -> int:
    """Canonical BDD from a truth table; index bit j = variable at level j."""
    memo: dict[tuple[int, int], int] = {}

    def build(level: int, base: int) -> int:
        if level == n_vars:
            return ONE if values[base] else ZERO
        key = (level, base)
        found = memo.get(key)
        if found is None:
            stride = 1 << (n_vars - 1 - level)
            found = store.mk(level, build(level + 1, base),
                             build(level + 1, base + stride))
            memo[key] = found
        return found

    return build(0, 0)


def explicit_to_symbolic(d: ExplicitDfa, node_cap: int = DEFAULT_NODE_CAP) -> SymbolicDfa:
    """Log-size boolean re-encoding of an explicit DFA: state i becomes the
    binary vector of i over ceil(log2 |S|) bits.  Unused codes transition to
    state 0 and reject, keeping the machine total and the language unchanged."""
    n = d.n_states
    k = max(1, (n - 1).bit_length())
    state_vars = tuple(f"x{i}" for i in range(k))
    store = BddStore(state_vars + d.atoms, node_cap=node_cap)
    m = k + len(d.atoms)

    def assignment(idx: int) -> tuple[int, int]:
        # table index is most-significant-first in variable order
        bits = [(idx >> (m - 1 - j)) & 1 for j in range(m)]
        state = sum(bits[q] << q for q in range(k))
        letter = sum(bits[k + j] << j for j in range(len(d.atoms)))
        return state, letter

    eta = {}
    tables = [[0] * (1 << m) for _ in range(k)]
    for idx in range(1 << m):
        state, letter = assignment(idx)
        nxt = d.delta[state][letter] if state < n else 0
        for q in range(k):
            tables[q][idx] = nxt >> q & 1
    for q in range(k):
        eta[state_vars[q]] = _table_bdd(store, m, tuple(tables[q]))

    ftable = [0] * (1 << k)
    for i in range(n):
        if i in d.accepting:
            ftable[sum((i >> q & 1) << (k - 1 - q) for q in range(k))] = 1
    f = _table_bdd(store, k, tuple(ftable))
    labels = {state_vars[q]: f"code bit {q}" for q in range(k)}
    return SymbolicDfa(store, d.atoms, state_vars, d.initial, eta, f, labels)


# edge tables ----------------------------------------------------------------

@dataclass(frozen=True)
class DupNode:
    alpha: int  # 1-based, unique across all roots
    root_index: int
    var: str
    low: tuple[str, int]  # ('node', alpha) or ('term', 0/1)
    high: tuple[str, int]


@dataclass
class EdgeTables:
    """Per-root duplicated node space with Pre/Post/PreT edge views.

    An edge (beta, v, d) says: from node beta, labelled by beta's variable v,
    on branch d.  `roots` holds one entry per input root: ('node', alpha) for
    a nonterminal root or ('term', c) for a constant BDD.
    """

    roots: tuple[tuple[str, int], ...]
    nodes: tuple[DupNode, ...]

    @property
    def u(self) -> int:
        return len(self.nodes)

    @property
    def edge_count(self) -> int:
        return 2 * len(self.nodes)

    def node(self, alpha: int) -> DupNode:
        return self.nodes[alpha - 1]

    def pre(self, alpha: int) -> list[tuple[int, str, int]]:
        out = []
        for nd in self.nodes:
            if nd.low == ("node", alpha):
                out.append((nd.alpha, nd.var, 0))
            if nd.high == ("node", alpha):
                out.append((nd.alpha, nd.var, 1))
        return out

    def post(self, alpha: int) -> list[tuple[int, str, int]]:
        nd = self.node(alpha)
        out = []
        if nd.low[0] == "node":
            out.append((nd.low[1], nd.var, 0))
        if nd.high[0] == "node":
            out.append((nd.high[1], nd.var, 1))
        return out

    def pre_t(self, root_index: int, c: int) -> list[tuple[int, str, int]]:
        out = []
        for nd in self.nodes:
            if nd.root_index != root_index:
                continue
            if nd.low == ("term", c):
                out.append((nd.alpha, nd.var, 0))
            if nd.high == ("term", c):
                out.append((nd.alpha, nd.var, 1))
        return out

    def dump(self) -> str:
        lines = []
        for r, ref in enumerate(self.roots):
            lines.append(f"root {r}: {ref[0]} {ref[1]}")
        for nd in self.nodes:
            lines.append(
                f"N{nd.alpha} root={nd.root_index} var={nd.var}"
                f" low={nd.low[0]}:{nd.low[1]} high={nd.high[0]}:{nd.high[1]}"
            )
        return "\n".join(lines) + "\n"


def extract_edges(roots, store: BddStore) -> EdgeTables:
    """Duplicate each root's reachable nonterminals into a private id space.

    Node ids are assigned in preorder (low subtree before high) per root, in
    root order, starting at 1; sharing across roots is split so terminal
    edges attribute to exactly one BDD.
    """
    nodes: list[DupNode] = []
    root_refs: list[tuple[str, int]] = []
    counter = 1
    for r, root in enumerate(roots):
        if store.is_terminal(root):
            root_refs.append(("term", root))
            continue
        alpha_of: dict[int, int] = {}
        order = store.reachable(root)
        for f in order:
            alpha_of[f] = counter
            counter += 1

        def ref(child: int) -> tuple[str, int]:
            if store.is_terminal(child):
                return ("term", child)
            return ("node", alpha_of[child])

        for f in order:
            nodes.append(DupNode(
                alpha_of[f], r, store.var_names[store.level(f)],
                ref(store.low(f)), ref(store.high(f)),
            ))
        root_refs.append(("node", alpha_of[root]))
    return EdgeTables(tuple(root_refs), tuple(nodes))
