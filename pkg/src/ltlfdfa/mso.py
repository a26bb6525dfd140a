"""Second-order sentences of the shape  exists Q1..Qm (Init(0) and forall x Matrix).

The matrix is a boolean combination of position guards (x=0, x=last, x!=last,
x>0) and memberships of x-1/x/x+1 in set terms.  Set terms bottom out at
named predicates and may use ALIVE (all positions), {last}, union,
intersection, difference and the shift-by-one operation; memberships of
positions outside 0..last are false everywhere.

Six encoder variations translate a future formula into this shape: a choice
of normal form (bnf/nnf), of constraint tightness (fussy: iff, sloppy:
implication, nnf only) and of variable economy (full: one quantified
predicate per non-atomic subformula, lean: only for U/R subformulas, the
rest rebuilt as set terms).
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import formulas as fm
from .errors import BudgetExceededError
from .traces import MonadicStructure, Trace, eval_ltlf_at


# set terms ----------------------------------------------------------------

@dataclass(frozen=True)
class SetTerm:
    pass


@dataclass(frozen=True)
class SPred(SetTerm):
    name: str


@dataclass(frozen=True)
class SAlive(SetTerm):
    pass


@dataclass(frozen=True)
class SEmpty(SetTerm):
    pass


@dataclass(frozen=True)
class SLastOnly(SetTerm):
    pass


@dataclass(frozen=True)
class SShift(SetTerm):
    """The set shifted down by one: x is a member iff x+1 is in the base."""

    base: SetTerm


@dataclass(frozen=True)
class SUnion(SetTerm):
    left: SetTerm
    right: SetTerm


@dataclass(frozen=True)
class SInter(SetTerm):
    left: SetTerm
    right: SetTerm


@dataclass(frozen=True)
class SDiff(SetTerm):
    left: SetTerm
    right: SetTerm


# matrix expressions -------------------------------------------------------

@dataclass(frozen=True)
class MExpr:
    pass


@dataclass(frozen=True)
class MTrue(MExpr):
    pass


@dataclass(frozen=True)
class MFalse(MExpr):
    pass


@dataclass(frozen=True)
class Member(MExpr):
    """x+offset is in the set term; offset is -1, 0 or +1."""

    term: SetTerm
    offset: int = 0


@dataclass(frozen=True)
class Guard(MExpr):
    kind: str  # 'first' (x=0), 'last' (x=last), 'not_last', 'positive' (x>0)


@dataclass(frozen=True)
class MNot(MExpr):
    child: MExpr


@dataclass(frozen=True)
class MAnd(MExpr):
    parts: tuple[MExpr, ...]


@dataclass(frozen=True)
class MOr(MExpr):
    parts: tuple[MExpr, ...]


@dataclass(frozen=True)
class MImplies(MExpr):
    left: MExpr
    right: MExpr


@dataclass(frozen=True)
class MIff(MExpr):
    left: MExpr
    right: MExpr


def mand(*parts: MExpr) -> MExpr:
    return MAnd(tuple(parts))


def mor(*parts: MExpr) -> MExpr:
    return MOr(tuple(parts))


def _walk(e: MExpr):
    yield e
    if isinstance(e, MNot):
        yield from _walk(e.child)
    elif isinstance(e, (MAnd, MOr)):
        for p in e.parts:
            yield from _walk(p)
    elif isinstance(e, (MImplies, MIff)):
        yield from _walk(e.left)
        yield from _walk(e.right)


def _term_preds(t: SetTerm):
    if isinstance(t, SPred):
        yield t.name
    elif isinstance(t, SShift):
        yield from _term_preds(t.base)
    elif isinstance(t, (SUnion, SInter, SDiff)):
        yield from _term_preds(t.left)
        yield from _term_preds(t.right)


# the sentence -------------------------------------------------------------

@dataclass
class MonadicSentence:
    """exists2 quantified: Init(0) and forall x (conjunction of clauses).

    `atoms` are the free input predicates; every membership offset must stay
    inside the x-1..x+1 window (checked at construction: this is what makes
    the sentence compilable by the scanning construction downstream).
    """

    atoms: tuple[str, ...]
    quantified: tuple[str, ...]
    init: MExpr
    clauses: tuple[MExpr, ...]
    labels: dict[str, str] = field(default_factory=dict)
    order_hint: tuple[str, ...] = ()  # compiler variable order; semantics-free

    def __post_init__(self):
        if self.order_hint and sorted(self.order_hint) != sorted(self.quantified):
            raise ValueError("order hint must permute the quantified predicates")
        for off in self._offsets(self.init):
            if off != 0:
                raise ValueError("init part may only reference position 0")
        for c in self.clauses:
            for off in self._offsets(c):
                if off not in (-1, 0, 1):
                    raise ValueError(f"matrix reference outside the window: offset {off}")
        known = set(self.atoms) | set(self.quantified)
        for e in (self.init, *self.clauses):
            for sub in _walk(e):
                if isinstance(sub, Member):
                    for p in _term_preds(sub.term):
                        if p not in known:
                            raise ValueError(f"unknown predicate {p!r} in sentence")

    @staticmethod
    def _offsets(e: MExpr):
        for sub in _walk(e):
            if isinstance(sub, Member):
                yield sub.offset

    @property
    def quantifier_count(self) -> int:
        return len(self.quantified)

    @property
    def clause_count(self) -> int:
        return len(self.clauses)


# evaluation ---------------------------------------------------------------

def member_at(term: SetTerm, pos: int, struct: MonadicStructure) -> bool:
    if pos < 0 or pos >= struct.size:
        return False
    if isinstance(term, SPred):
        return pos in struct.extent(term.name)
    if isinstance(term, SAlive):
        return True
    if isinstance(term, SEmpty):
        return False
    if isinstance(term, SLastOnly):
        return pos == struct.last
    if isinstance(term, SShift):
        return member_at(term.base, pos + 1, struct)
    if isinstance(term, SUnion):
        return member_at(term.left, pos, struct) or member_at(term.right, pos, struct)
    if isinstance(term, SInter):
        return member_at(term.left, pos, struct) and member_at(term.right, pos, struct)
    if isinstance(term, SDiff):
        return member_at(term.left, pos, struct) and not member_at(term.right, pos, struct)
    raise TypeError(term)


def holds_at(e: MExpr, x: int, struct: MonadicStructure) -> bool:
    if isinstance(e, MTrue):
        return True
    if isinstance(e, MFalse):
        return False
    if isinstance(e, Member):
        return member_at(e.term, x + e.offset, struct)
    if isinstance(e, Guard):
        return {
            "first": x == 0,
            "last": x == struct.last,
            "not_last": x != struct.last,
            "positive": x > 0,
        }[e.kind]
    if isinstance(e, MNot):
        return not holds_at(e.child, x, struct)
    if isinstance(e, MAnd):
        return all(holds_at(p, x, struct) for p in e.parts)
    if isinstance(e, MOr):
        return any(holds_at(p, x, struct) for p in e.parts)
    if isinstance(e, MImplies):
        return (not holds_at(e.left, x, struct)) or holds_at(e.right, x, struct)
    if isinstance(e, MIff):
        return holds_at(e.left, x, struct) == holds_at(e.right, x, struct)
    raise TypeError(e)


def eval_with_extents(struct: MonadicStructure, s: MonadicSentence) -> bool:
    """Init and matrix under a structure that already interprets every predicate."""
    if not holds_at(s.init, 0, struct):
        return False
    return all(
        holds_at(c, x, struct) for c in s.clauses for x in range(struct.size)
    )


DEFAULT_BRUTE_BITS = 20


def eval_sentence_bruteforce(struct: MonadicStructure, s: MonadicSentence,
                             bit_cap: int = DEFAULT_BRUTE_BITS) -> bool:
    """Exhaust all extent assignments of the quantified predicates.

    Iteration is predicate-major, position-minor over packed bit vectors;
    the oracle side of every second-order correctness statement.
    """
    n = struct.size
    bits = len(s.quantified) * n
    if bits > bit_cap:
        raise BudgetExceededError(
            f"{len(s.quantified)} predicates over {n} positions need {bits} bits"
            f" (cap {bit_cap})"
        )
    for packed in range(1 << bits):
        extents = {
            q: frozenset(x for x in range(n) if packed >> (j * n + x) & 1)
            for j, q in enumerate(s.quantified)
        }
        if eval_with_extents(struct.extended(extents), s):
            return True
    return False


# encoder ------------------------------------------------------------------

@dataclass(frozen=True)
class EncodingConfig:
    """One of the six viable (normal form, constraint, variables) combinations."""

    norm: str = "bnf"
    constraint: str = "fussy"
    variables: str = "full"

    def __post_init__(self):
        if self.norm not in ("bnf", "nnf"):
            raise ValueError(f"norm must be bnf or nnf, got {self.norm!r}")
        if self.constraint not in ("fussy", "sloppy"):
            raise ValueError(f"constraint must be fussy or sloppy, got {self.constraint!r}")
        if self.variables not in ("full", "lean"):
            raise ValueError(f"variables must be full or lean, got {self.variables!r}")
        if self.norm == "bnf" and self.constraint == "sloppy":
            # only negation normal form confines negation to atoms, which is
            # what lets the one-directional constraints stay sound
            raise ValueError("the sloppy constraint form requires nnf")

    @property
    def name(self) -> str:
        return f"{self.norm}-{self.constraint}-{self.variables}"


ALL_CONFIGS = tuple(
    EncodingConfig(norm, constraint, variables)
    for norm in ("bnf", "nnf")
    for constraint in ("fussy", "sloppy")
    for variables in ("full", "lean")
    if not (norm == "bnf" and constraint == "sloppy")
)


def normalize(phi: fm.Formula, norm: str) -> fm.Formula:
    return fm.to_bnf(phi) if norm == "bnf" else fm.to_nnf(phi)


def encode_mso(phi: fm.Formula, cfg: EncodingConfig,
               atom_names=None) -> MonadicSentence:
    """Translate the future formula into a second-order sentence per `cfg`."""
    return _encode_unchecked(phi, cfg.norm, cfg.constraint, cfg.variables, atom_names)


def _encode_unchecked(phi: fm.Formula, norm: str, constraint: str, variables: str,
                      atom_names=None) -> MonadicSentence:
    """Encoder without the config validity check.

    Exists so the forbidden bnf+sloppy combination can be materialized as a
    counterexample by tests and by the fault-injection mode of the checker;
    production paths go through `encode_mso`.
    """
    phi_n = normalize(phi, norm)
    atoms = tuple(sorted(atom_names)) if atom_names is not None else fm.alphabet(phi_n)
    cl = fm.closure(phi_n)
    link = MIff if constraint == "fussy" else MImplies
    if variables == "full":
        return _encode_full(phi_n, cl, link, atoms)
    return _encode_lean(phi_n, cl, link, atoms)


def _qname(i: int) -> str:
    # '$' keeps quantified names disjoint from atom identifiers
    return f"${i}"


def _encode_full(phi: fm.Formula, cl: fm.Closure, link, atoms) -> MonadicSentence:
    names = {theta: _qname(i) for i, theta in enumerate(cl.non_atomic)}

    def ref(theta: fm.Formula, off: int = 0) -> MExpr:
        if isinstance(theta, fm.TrueF):
            return MTrue()
        if isinstance(theta, fm.FalseF):
            return MFalse()
        if isinstance(theta, fm.Atom):
            return Member(SPred(theta.name), off)
        return Member(SPred(names[theta]), off)

    clauses = []
    for theta in cl.non_atomic:
        lhs = ref(theta)
        if isinstance(theta, fm.Not):
            rhs = MNot(ref(theta.child))
        elif isinstance(theta, fm.And):
            rhs = mand(ref(theta.left), ref(theta.right))
        elif isinstance(theta, fm.Or):
            rhs = mor(ref(theta.left), ref(theta.right))
        elif isinstance(theta, fm.Next):
            rhs = mand(Guard("not_last"), ref(theta.child, +1))
        elif isinstance(theta, fm.WeakNext):
            rhs = mor(Guard("last"), ref(theta.child, +1))
        elif isinstance(theta, fm.Until):
            rhs = mor(ref(theta.right),
                      mand(Guard("not_last"), ref(theta.left), ref(theta, +1)))
        elif isinstance(theta, fm.Release):
            rhs = mand(ref(theta.right),
                       mor(Guard("last"), ref(theta.left), ref(theta, +1)))
        else:
            raise TypeError(f"{type(theta).__name__} cannot appear in a normal form")
        clauses.append(link(lhs, rhs))
    labels = {names[t]: fm.to_text(t) for t in cl.non_atomic}
    return MonadicSentence(atoms, tuple(names[t] for t in cl.non_atomic),
                           ref(phi), tuple(clauses), labels)


def lean_terms(cl: fm.Closure) -> dict[fm.Formula, SetTerm]:
    """The set term standing in for each closure member: fixpoint members
    keep their own quantified predicate, every other member is rebuilt from
    its children's terms."""
    fixpoints = tuple(t for t in cl.non_atomic if fm.is_fixpoint(t))
    names = {theta: _qname(i) for i, theta in enumerate(fixpoints)}
    terms: dict[fm.Formula, SetTerm] = {}
    for theta in cl.members:  # post-order: children first
        if isinstance(theta, fm.TrueF):
            t = SAlive()
        elif isinstance(theta, fm.FalseF):
            t = SEmpty()
        elif isinstance(theta, fm.Atom):
            t = SPred(theta.name)
        elif isinstance(theta, fm.Not):
            t = SDiff(SAlive(), terms[theta.child])
        elif isinstance(theta, fm.And):
            t = SInter(terms[theta.left], terms[theta.right])
        elif isinstance(theta, fm.Or):
            t = SUnion(terms[theta.left], terms[theta.right])
        elif isinstance(theta, fm.Next):
            t = SDiff(SShift(terms[theta.child]), SLastOnly())
        elif isinstance(theta, fm.WeakNext):
            t = SUnion(SShift(terms[theta.child]), SLastOnly())
        elif isinstance(theta, (fm.Until, fm.Release)):
            t = SPred(names[theta])
        else:
            raise TypeError(f"{type(theta).__name__} cannot appear in a normal form")
        terms[theta] = t
    return terms


def _encode_lean(phi: fm.Formula, cl: fm.Closure, link, atoms) -> MonadicSentence:
    fixpoints = tuple(t for t in cl.non_atomic if fm.is_fixpoint(t))
    names = {theta: _qname(i) for i, theta in enumerate(fixpoints)}
    lean = lean_terms(cl)
    clauses = []
    for theta in fixpoints:
        lhs = Member(SPred(names[theta]))
        if isinstance(theta, fm.Until):
            rhs = mor(Member(lean[theta.right]),
                      mand(Guard("not_last"), Member(lean[theta.left]),
                           Member(SPred(names[theta]), +1)))
        else:
            rhs = mand(Member(lean[theta.right]),
                       mor(Guard("last"), Member(lean[theta.left]),
                           Member(SPred(names[theta]), +1)))
        clauses.append(link(lhs, rhs))
    init = Member(lean[phi], 0)
    labels = {names[t]: fm.to_text(t) for t in fixpoints}
    return MonadicSentence(atoms, tuple(names[t] for t in fixpoints),
                           init, tuple(clauses), labels)


# canonical witness --------------------------------------------------------

def canonical_extents(rho: Trace, phi: fm.Formula, cfg: EncodingConfig) -> dict[str, frozenset[int]]:
    """The subformula truth sets used in the soundness direction of the proofs."""
    phi_n = normalize(phi, cfg.norm)
    cl = fm.closure(phi_n)
    members = cl.non_atomic if cfg.variables == "full" else tuple(
        t for t in cl.non_atomic if fm.is_fixpoint(t))
    return {
        _qname(i): frozenset(x for x in range(len(rho)) if eval_ltlf_at(rho, theta, x))
        for i, theta in enumerate(members)
    }


def eval_sentence_witness(rho: Trace, phi: fm.Formula, s: MonadicSentence,
                          cfg: EncodingConfig) -> bool:
    """Check Init and matrix under the canonical extents read off the trace."""
    phi_n = normalize(phi, cfg.norm)
    cl = fm.closure(phi_n)
    members = cl.non_atomic if cfg.variables == "full" else tuple(
        t for t in cl.non_atomic if fm.is_fixpoint(t))
    expected = {_qname(i): fm.to_text(t) for i, t in enumerate(members)}
    if expected != s.labels or set(expected) != set(s.quantified):
        raise ValueError("sentence does not match the formula's closure")
    extents = canonical_extents(rho, phi, cfg)
    struct = MonadicStructure.from_trace(rho, s.atoms).extended(extents)
    return eval_with_extents(struct, s)


# debug printing -----------------------------------------------------------

def term_text(t: SetTerm) -> str:
    if isinstance(t, SPred):
        return t.name
    if isinstance(t, SAlive):
        return "ALIVE"
    if isinstance(t, SEmpty):
        return "EMPTY"
    if isinstance(t, SLastOnly):
        return "{last}"
    if isinstance(t, SShift):
        return f"({term_text(t.base)} - 1)"
    if isinstance(t, SUnion):
        return f"({term_text(t.left)} union {term_text(t.right)})"
    if isinstance(t, SInter):
        return f"({term_text(t.left)} inter {term_text(t.right)})"
    if isinstance(t, SDiff):
        return f"({term_text(t.left)} \\ {term_text(t.right)})"
    raise TypeError(t)


def expr_text(e: MExpr, pos: str = "x") -> str:
    if isinstance(e, MTrue):
        return "true"
    if isinstance(e, MFalse):
        return "false"
    if isinstance(e, Member):
        at = {0: pos, 1: f"{pos}+1", -1: f"{pos}-1"}[e.offset]
        return f"{term_text(e.term)}({at})"
    if isinstance(e, Guard):
        return {"first": f"{pos}=0", "last": f"{pos}=last",
                "not_last": f"{pos}!=last", "positive": f"{pos}>0"}[e.kind]
    if isinstance(e, MNot):
        return f"!{expr_text(e.child, pos)}"
    if isinstance(e, MAnd):
        return "(" + " & ".join(expr_text(p, pos) for p in e.parts) + ")"
    if isinstance(e, MOr):
        return "(" + " | ".join(expr_text(p, pos) for p in e.parts) + ")"
    if isinstance(e, MImplies):
        return f"({expr_text(e.left, pos)} -> {expr_text(e.right, pos)})"
    if isinstance(e, MIff):
        return f"({expr_text(e.left, pos)} <-> {expr_text(e.right, pos)})"
    raise TypeError(e)


def sentence_text(s: MonadicSentence) -> str:
    lines = []
    if s.quantified:
        named = ", ".join(
            f"{q}={s.labels[q]}" if q in s.labels else q for q in s.quantified)
        lines.append(f"exists2 {named}:")
    lines.append(f"init: {expr_text(s.init, '0')}")
    for c in s.clauses:
        lines.append(f"all x: {expr_text(c)}")
    return "\n".join(lines)
