"""Compiles sequential second-order sentences into minimized explicit DFAs.

The construction scans the word with one extended letter per position: the
input atoms plus one column per quantified predicate (and per derived
column, below).  A position's matrix clauses are checked as soon as their
window is available: clauses looking backward (x-1, x) when its letter is
read, clauses looking forward (x, x+1) when the next letter is read, and
the final position's forward clauses at end-of-word with x+1 out of domain.
Projecting away the non-atom columns yields the language's NFA, which is
then determinized and minimized.

Lowering removes everything the scan cannot see directly:

  * `x=last` / `x!=last` guards and `{last}` terms become one reserved
    column that is forced false at every position that has a successor and
    required at the final one;
  * every shifted set term becomes a fresh column pinned by an
    iff-definition one step later, so nested shifts never reference beyond
    the window.

The determinization never materializes the extended alphabet: a subset of
extended letters is a BDD over the column variables, the one-step relation
is a BDD over current and primed columns, and the subset image is
conjoin-quantify-rename.  Subset states are therefore hash-consed BDD
roots, and equal subsets are discovered for free.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from . import mso
from .automata import ExplicitDfa, minimize
from .bdd import ONE, ZERO, BddStore
from .errors import BudgetExceededError

DEFAULT_WIDTH_CAP = 256
DEFAULT_COMPILE_STATE_CAP = 200_000

_LASTP = "$last"


@dataclass
class Lowered:
    preds: tuple[str, ...]  # atoms first, then quantified, columns, marker
    init: mso.MExpr
    backward: tuple[mso.MExpr, ...]  # offsets within {-1, 0}
    forward: tuple[mso.MExpr, ...]  # offsets within {0, +1}
    uses_last: bool


class _Lowerer:
    def __init__(self, sentence: mso.MonadicSentence):
        self.sentence = sentence
        self.columns: dict[mso.SetTerm, str] = {}
        self.column_clauses: list[mso.MExpr] = []
        self.uses_last = False

    def _last_ref(self, offset: int = 0) -> mso.MExpr:
        self.uses_last = True
        return mso.Member(mso.SPred(_LASTP), offset)

    def _column(self, term: mso.SShift) -> str:
        if term in self.columns:
            return self.columns[term]
        name = f"$C{len(self.columns)}"
        self.columns[term] = name
        body = self.member(term.base, 0)
        # pinned one step later: C(x-1) holds iff the base holds at x,
        # and C is false at the final position (x+1 does not exist there)
        self.column_clauses.append(mso.MImplies(
            mso.Guard("positive"),
            mso.MIff(mso.Member(mso.SPred(name), -1), body)))
        self.column_clauses.append(mso.MImplies(
            self._last_ref(), mso.MNot(mso.Member(mso.SPred(name), 0))))
        return name

    def member(self, term: mso.SetTerm, offset: int) -> mso.MExpr:
        if isinstance(term, mso.SPred):
            return mso.Member(term, offset)
        if isinstance(term, mso.SShift):
            return mso.Member(mso.SPred(self._column(term)), offset)
        if isinstance(term, mso.SAlive):
            if offset == 0:
                return mso.MTrue()
            if offset == 1:
                return mso.MNot(self._last_ref())
            return mso.Guard("positive")
        if isinstance(term, mso.SEmpty):
            return mso.MFalse()
        if isinstance(term, mso.SLastOnly):
            return self._last_ref(offset)
        if isinstance(term, mso.SUnion):
            return mso.mor(self.member(term.left, offset), self.member(term.right, offset))
        if isinstance(term, mso.SInter):
            return mso.mand(self.member(term.left, offset), self.member(term.right, offset))
        if isinstance(term, mso.SDiff):
            return mso.mand(self.member(term.left, offset),
                            mso.MNot(self.member(term.right, offset)))
        raise TypeError(term)

    def expr(self, e: mso.MExpr) -> mso.MExpr:
        if isinstance(e, (mso.MTrue, mso.MFalse)):
            return e
        if isinstance(e, mso.Member):
            return self.member(e.term, e.offset)
        if isinstance(e, mso.Guard):
            if e.kind == "last":
                return self._last_ref()
            if e.kind == "not_last":
                return mso.MNot(self._last_ref())
            return e  # first / positive are index-known to the scan
        if isinstance(e, mso.MNot):
            return mso.MNot(self.expr(e.child))
        if isinstance(e, mso.MAnd):
            return mso.MAnd(tuple(self.expr(p) for p in e.parts))
        if isinstance(e, mso.MOr):
            return mso.MOr(tuple(self.expr(p) for p in e.parts))
        if isinstance(e, mso.MImplies):
            return mso.MImplies(self.expr(e.left), self.expr(e.right))
        if isinstance(e, mso.MIff):
            return mso.MIff(self.expr(e.left), self.expr(e.right))
        raise TypeError(e)


def _offsets(e: mso.MExpr) -> set[int]:
    out: set[int] = set()
    if isinstance(e, mso.Member):
        out.add(e.offset)
    elif isinstance(e, mso.MNot):
        out |= _offsets(e.child)
    elif isinstance(e, (mso.MAnd, mso.MOr)):
        for p in e.parts:
            out |= _offsets(p)
    elif isinstance(e, (mso.MImplies, mso.MIff)):
        out |= _offsets(e.left) | _offsets(e.right)
    return out


def lower(sentence: mso.MonadicSentence) -> Lowered:
    lo = _Lowerer(sentence)
    init = lo.expr(sentence.init)
    body = [lo.expr(c) for c in sentence.clauses]
    body.extend(lo.column_clauses)
    backward, forward = [], []
    for c in body:
        offs = _offsets(c)
        if 1 in offs and -1 in offs:
            raise ValueError("malformed window reference: a clause mixes x-1 and x+1")
        (forward if 1 in offs else backward).append(c)
    if _offsets(init) - {0}:
        raise ValueError("init may only reference position 0")
    quantified = sentence.order_hint or sentence.quantified
    preds = tuple(sentence.atoms) + tuple(quantified) + tuple(lo.columns.values())
    if lo.uses_last:
        preds += (_LASTP,)
    return Lowered(preds, init, tuple(backward), tuple(forward), lo.uses_last)


# --- translation of lowered expressions into constraint BDDs ---------------

def _prime(name: str) -> str:
    return name + "'"


def _expr_bdd(store: BddStore, e: mso.MExpr, off_map: dict[int, str | None],
              first: bool, positive: bool) -> int:
    if isinstance(e, mso.MTrue):
        return ONE
    if isinstance(e, mso.MFalse):
        return ZERO
    if isinstance(e, mso.Member):
        role = off_map[e.offset]
        if role is None:
            return ZERO  # the referenced position is outside the word
        name = e.term.name if role == "u" else _prime(e.term.name)
        return store.var(name)
    if isinstance(e, mso.Guard):
        if e.kind == "first":
            return ONE if first else ZERO
        if e.kind == "positive":
            return ONE if positive else ZERO
        raise ValueError(f"guard {e.kind!r} should have been lowered away")
    if isinstance(e, mso.MNot):
        return store.not_(_expr_bdd(store, e.child, off_map, first, positive))
    if isinstance(e, mso.MAnd):
        return store.conj(_expr_bdd(store, p, off_map, first, positive) for p in e.parts)
    if isinstance(e, mso.MOr):
        return store.disj(_expr_bdd(store, p, off_map, first, positive) for p in e.parts)
    if isinstance(e, mso.MImplies):
        return store.implies(_expr_bdd(store, e.left, off_map, first, positive),
                             _expr_bdd(store, e.right, off_map, first, positive))
    if isinstance(e, mso.MIff):
        return store.iff(_expr_bdd(store, e.left, off_map, first, positive),
                         _expr_bdd(store, e.right, off_map, first, positive))
    raise TypeError(e)


def _conj_balanced(store: BddStore, roots: list[int], deadline=None) -> int:
    """Pairwise-balanced conjunction; adjacent clauses are the most related,
    so this keeps intermediates far smaller than a linear fold."""
    if not roots:
        return ONE
    layer = list(roots)
    while len(layer) > 1:
        if deadline is not None:
            deadline.check()
        layer = [
            store.and_(layer[i], layer[i + 1]) if i + 1 < len(layer) else layer[i]
            for i in range(0, len(layer), 2)
        ]
    return layer[0]


@dataclass
class CompileStats:
    width: int  # columns of the extended alphabet, internals included
    spec_width: int  # atoms + quantified predicates only
    det_states: int  # determinized states before minimization
    final_states: int


def compile_sentence(sentence: mso.MonadicSentence, *,
                     width_cap: int = DEFAULT_WIDTH_CAP,
                     state_cap: int = DEFAULT_COMPILE_STATE_CAP,
                     deadline=None) -> ExplicitDfa:
    dfa, _ = compile_with_stats(sentence, width_cap=width_cap,
                                state_cap=state_cap, deadline=deadline)
    return dfa


class _Scanner:
    """The scanning construction over one lowered sentence.

    Clause BDDs are never conjoined into one transition relation: images
    conjoin them onto the (small) current subset one by one, restricted to
    the concrete input letter first and with spent current-position
    variables quantified out as early as possible.  Wide sentences (the
    compact encoding quantifies one predicate per BDD node) stay tractable
    this way where a monolithic relation blows up.
    """

    def __init__(self, low: Lowered, atoms: tuple[str, ...], deadline=None):
        self.low = low
        self.atoms = atoms
        self.deadline = deadline
        names: list[str] = []
        for p in low.preds:
            names.append(p)
            names.append(_prime(p))
        self.store = BddStore(names, node_cap=1 << 23)
        self.unprime_map = {_prime(p): p for p in low.preds}
        self._usupport_cache: dict[int, frozenset[int]] = {}
        self._step_cache: dict[tuple[int, bool], tuple] = {}
        self._init_cache: dict[int, int] = {}
        store = self.store
        # step clauses: forward at the stored position x (guards depend on
        # whether x is 0), backward at the position being read
        step_clauses = {
            first: [
                _expr_bdd(store, c, {0: "u", 1: "p", -1: None}, first, not first)
                for c in low.forward
            ] + [
                _expr_bdd(store, c, {-1: "u", 0: "p", 1: None}, False, True)
                for c in low.backward
            ] + ([store.nvar(_LASTP)] if low.uses_last else [])
            for first in (True, False)
        }
        self.init_all = _conj_balanced(store, [
            _expr_bdd(store, low.init, {0: "u", 1: None, -1: None}, True, False)
        ] + [
            _expr_bdd(store, c, {-1: None, 0: "u", 1: None}, True, False)
            for c in low.backward
        ])
        self.acc = {}
        for first in (True, False):
            out = ONE
            for c in low.forward:
                out = store.and_(out, _expr_bdd(
                    store, c, {0: "u", 1: None, -1: None}, first, not first))
            if low.uses_last:
                out = store.and_(out, store.var(_LASTP))
            self.acc[first] = out
        # split each variant into a primed-only part (conjoined once, then
        # restricted per letter) and clauses that read the stored position
        self.valid_all: dict[bool, int] = {}
        self.mixed: dict[bool, list[int]] = {}
        for first in (True, False):
            if deadline is not None:
                deadline.check()
            plain, mixed = [], []
            for c in step_clauses[first]:
                (mixed if self._usupport(c) else plain).append(c)
            self.valid_all[first] = _conj_balanced(store, plain, deadline)
            self.mixed[first] = mixed
        # a predicate whose current-position variable no step or acceptance
        # clause ever reads cannot influence the future: project it from
        # subset states eagerly so equal-future states actually coincide
        live: set[int] = set()
        for first in (True, False):
            for c in self.mixed[first]:
                live |= self._usupport(c)
            live |= self._usupport(self.acc[first])
        self.dead = [p for i, p in enumerate(low.preds) if 2 * i not in live]
        self.live_atoms = [(i, a) for i, a in enumerate(atoms) if a not in self.dead]

    def _usupport(self, node: int) -> frozenset[int]:
        """Unprimed levels (even) in the BDD's support."""
        found = self._usupport_cache.get(node)
        if found is None:
            found = frozenset(
                self.store.level(f) for f in self.store.reachable(node)
                if self.store.level(f) % 2 == 0)
            self._usupport_cache[node] = found
        return found

    def _restrict_letter(self, node: int, letter: int, primed: bool) -> int:
        for i, a in enumerate(self.atoms):
            name = _prime(a) if primed else a
            node = self.store.restrict(node, name, bool(letter >> i & 1))
        return node

    def _live_letter_cube(self, letter: int) -> int:
        out = ONE
        for i, a in self.live_atoms:
            lit = self.store.var(a) if letter >> i & 1 else self.store.nvar(a)
            out = self.store.and_(out, lit)
        return out

    def _step_parts(self, letter: int, first: bool) -> tuple:
        """Per-letter pieces: the primed-only conjunction restricted to the
        letter, plus mixed clauses pre-conjoined per stored-position level
        (the level's variable dies once its group is conjoined)."""
        key = (letter, first)
        found = self._step_cache.get(key)
        if found is not None:
            return found
        if self.deadline is not None:
            self.deadline.check()
        valid = self._restrict_letter(self.valid_all[first], letter, True)
        by_level: dict[int, list[int]] = {}
        for c in self.mixed[first]:
            r = self._restrict_letter(c, letter, True)
            by_level.setdefault(max(self._usupport(c)), []).append(r)
        schedule = [
            (self.low.preds[lvl // 2],
             _conj_balanced(self.store, by_level[lvl], self.deadline))
            for lvl in sorted(by_level, reverse=True)  # bottom-most die first
        ]
        out = (valid, schedule)
        self._step_cache[key] = out
        return out

    def image(self, root: int, letter: int, first: bool) -> int:
        store = self.store
        valid, schedule = self._step_parts(letter, first)
        if valid == ZERO:
            return ZERO
        r = root
        quantified: set[str] = set()
        for name, group in schedule:
            r = store.and_(r, group)
            if r == ZERO:
                return ZERO
            r = store.exists(r, [name])
            quantified.add(name)
        rest = [p for p in self.low.preds if p not in quantified]
        r = store.exists(r, rest)
        r = store.and_(r, valid)
        if r == ZERO:
            return ZERO
        r = store.rename(r, self.unprime_map)
        r = store.exists(r, self.dead)
        return store.and_(r, self._live_letter_cube(letter))

    def initial(self, letter: int) -> int:
        found = self._init_cache.get(letter)
        if found is None:
            store = self.store
            found = self._restrict_letter(self.init_all, letter, False)
            if found != ZERO:
                found = store.exists(found, self.dead)
                found = store.and_(found, self._live_letter_cube(letter))
            self._init_cache[letter] = found
        return found

    def accepting(self, root: int, first: bool) -> bool:
        return self.store.and_(root, self.acc[first]) != ZERO


def compile_with_stats(sentence: mso.MonadicSentence, *,
                       width_cap: int = DEFAULT_WIDTH_CAP,
                       state_cap: int = DEFAULT_COMPILE_STATE_CAP,
                       deadline=None) -> tuple[ExplicitDfa, CompileStats]:
    low = lower(sentence)
    if len(low.preds) > width_cap:
        raise BudgetExceededError(
            f"sentence needs {len(low.preds)} columns (cap {width_cap})")
    atoms = sentence.atoms
    n_letters = 1 << len(atoms)
    scanner = _Scanner(low, atoms, deadline)

    # subset construction: a state is (BDD of extended letters at the previous
    # position, whether that position is 0); state 0 is the fresh-start state
    start_key = ("start", None)
    index: dict = {start_key: 0}
    order = [start_key]
    delta: list[list[int]] = []
    queue = deque([start_key])
    dead_key = (ZERO, False)
    while queue:
        if deadline is not None:
            deadline.check()
        key = queue.popleft()
        row = []
        for letter in range(n_letters):
            if key == start_key:
                nxt = scanner.initial(letter)
                nkey = (nxt, True) if nxt != ZERO else dead_key
            elif key == dead_key:
                nkey = dead_key
            else:
                root, first = key
                nxt = scanner.image(root, letter, first)
                nkey = (nxt, False) if nxt != ZERO else dead_key
            if nkey not in index:
                if len(index) >= state_cap:
                    raise BudgetExceededError(
                        f"compilation exceeded {state_cap} subset states")
                index[nkey] = len(index)
                order.append(nkey)
                queue.append(nkey)
            row.append(index[nkey])
        delta.append(row)

    accepting = set()
    for key, i in index.items():
        if key == start_key or key == dead_key:
            continue
        root, first = key
        if scanner.accepting(root, first):
            accepting.add(i)

    raw = ExplicitDfa(atoms, 0, tuple(tuple(r) for r in delta), frozenset(accepting))
    final = minimize(raw, deadline)
    stats = CompileStats(
        width=len(low.preds),
        spec_width=len(atoms) + len(sentence.quantified),
        det_states=raw.n_states,
        final_states=final.n_states,
    )
    return final, stats
