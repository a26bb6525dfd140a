"""Abstract syntax, parsing, printing and normal forms for finite-trace temporal formulas.

Two dialects share one node family:

  * future (``ltlf``): ``true false atom ! & | -> X N U R`` plus the parse-time
    abbreviations ``F a == true U a`` and ``G a == false R a``;
  * past (``pltlf``): ``true false atom ! & | Y S`` (``->`` is accepted and
    desugared, the past dialect has no implication node).

Concrete grammar (operators listed loosest to tightest):

    formula := implies
    implies := or ('->' implies)?
    or      := and ('|' and)*
    and     := binary ('&' binary)*
    binary  := unary (('U'|'R'|'S') binary)?
    unary   := ('!'|'X'|'N'|'F'|'G'|'Y') unary | 'true' | 'false'
               | ident | '(' formula ')'

``U R S`` associate to the right, ``& |`` to the left.  Identifiers are
C-style names; the single capitals used as operators are reserved words.
Formulas are immutable; structurally equal subterms compare and hash equal,
which is what closure computation and predicate numbering rely on.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .errors import ParseError


@dataclass(frozen=True)
class Formula:
    pass


@dataclass(frozen=True)
class TrueF(Formula):
    pass


@dataclass(frozen=True)
class FalseF(Formula):
    pass


@dataclass(frozen=True)
class Atom(Formula):
    name: str


@dataclass(frozen=True)
class Not(Formula):
    child: Formula


@dataclass(frozen=True)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Or(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Implies(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Next(Formula):
    child: Formula


@dataclass(frozen=True)
class WeakNext(Formula):
    child: Formula


@dataclass(frozen=True)
class Until(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Release(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Yesterday(Formula):
    child: Formula


@dataclass(frozen=True)
class Since(Formula):
    left: Formula
    right: Formula


TRUE = TrueF()
FALSE = FalseF()

_FUTURE_ONLY = (Next, WeakNext, Until, Release, Implies)
_PAST_ONLY = (Yesterday, Since)


def children(phi: Formula) -> tuple[Formula, ...]:
    if isinstance(phi, (Not, Next, WeakNext, Yesterday)):
        return (phi.child,)
    if isinstance(phi, (And, Or, Implies, Until, Release, Since)):
        return (phi.left, phi.right)
    return ()


def is_ltlf(phi: Formula) -> bool:
    return not isinstance(phi, _PAST_ONLY) and all(is_ltlf(c) for c in children(phi))


def is_pltlf(phi: Formula) -> bool:
    return not isinstance(phi, _FUTURE_ONLY) and all(is_pltlf(c) for c in children(phi))


def atoms(phi: Formula) -> frozenset[str]:
    if isinstance(phi, Atom):
        return frozenset((phi.name,))
    out: frozenset[str] = frozenset()
    for c in children(phi):
        out |= atoms(c)
    return out


def alphabet(phi: Formula) -> tuple[str, ...]:
    """Sorted atom names; the alphabet every automaton for `phi` is built over."""
    return tuple(sorted(atoms(phi)))


# ---------------------------------------------------------------------------
# parsing

_TOKEN = re.compile(r"\s*(->|[!&|()]|[A-Za-z_][A-Za-z0-9_]*)")

_UNARY_OPS = {
    "ltlf": {"!", "X", "N", "F", "G"},
    "pltlf": {"!", "Y"},
}
_BINARY_OPS = {
    "ltlf": {"U", "R"},
    "pltlf": {"S"},
}
_ALL_OP_WORDS = {"X", "N", "U", "R", "F", "G", "Y", "S"}


class _Tokens:
    def __init__(self, text: str, dialect: str):
        self.text = text
        self.dialect = dialect
        self.items: list[tuple[str, int]] = []
        pos = 0
        while pos < len(text):
            if text[pos].isspace():
                pos += 1
                continue
            m = _TOKEN.match(text, pos)
            if m is None:
                raise ParseError(f"unexpected character {text[pos]!r}", pos)
            tok = m.group(1)
            self.items.append((tok, m.start(1)))
            pos = m.end()
        self.i = 0

    def peek(self) -> str | None:
        return self.items[self.i][0] if self.i < len(self.items) else None

    def pos(self) -> int:
        return self.items[self.i][1] if self.i < len(self.items) else len(self.text)

    def take(self) -> str:
        tok = self.peek()
        if tok is None:
            raise ParseError("unexpected end of input", len(self.text))
        self.i += 1
        return tok


def parse(text: str, dialect: str = "ltlf") -> Formula:
    """Parse formula text in the given dialect ('ltlf' or 'pltlf')."""
    if dialect not in ("ltlf", "pltlf"):
        raise ValueError(f"unknown dialect {dialect!r}")
    toks = _Tokens(text, dialect)
    phi = _parse_implies(toks)
    if toks.peek() is not None:
        raise ParseError(f"trailing input {toks.peek()!r}", toks.pos())
    return phi


def _parse_implies(toks: _Tokens) -> Formula:
    left = _parse_or(toks)
    if toks.peek() == "->":
        toks.take()
        right = _parse_implies(toks)
        if toks.dialect == "pltlf":
            # the past dialect has no implication node
            return Or(Not(left), right)
        return Implies(left, right)
    return left


def _parse_or(toks: _Tokens) -> Formula:
    phi = _parse_and(toks)
    while toks.peek() == "|":
        toks.take()
        phi = Or(phi, _parse_and(toks))
    return phi


def _parse_and(toks: _Tokens) -> Formula:
    phi = _parse_binary(toks)
    while toks.peek() == "&":
        toks.take()
        phi = And(phi, _parse_binary(toks))
    return phi


def _parse_binary(toks: _Tokens) -> Formula:
    left = _parse_unary(toks)
    tok = toks.peek()
    if tok in ("U", "R", "S"):
        if tok not in _BINARY_OPS[toks.dialect]:
            raise ParseError(f"operator {tok!r} not in dialect {toks.dialect!r}", toks.pos())
        toks.take()
        right = _parse_binary(toks)
        return {"U": Until, "R": Release, "S": Since}[tok](left, right)
    return left


def _parse_unary(toks: _Tokens) -> Formula:
    tok = toks.peek()
    pos = toks.pos()
    if tok is None:
        raise ParseError("unexpected end of input", pos)
    if tok in ("!", "X", "N", "F", "G", "Y"):
        if tok != "!" and tok not in _UNARY_OPS[toks.dialect]:
            raise ParseError(f"operator {tok!r} not in dialect {toks.dialect!r}", pos)
        toks.take()
        child = _parse_unary(toks)
        if tok == "!":
            return Not(child)
        if tok == "X":
            return Next(child)
        if tok == "N":
            return WeakNext(child)
        if tok == "F":
            return Until(TRUE, child)  # F a == true U a
        if tok == "G":
            return Release(FALSE, child)  # G a == false R a
        return Yesterday(child)
    if tok == "(":
        toks.take()
        phi = _parse_implies(toks)
        if toks.peek() != ")":
            raise ParseError("expected ')'", toks.pos())
        toks.take()
        return phi
    if tok == "true":
        toks.take()
        return TRUE
    if tok == "false":
        toks.take()
        return FALSE
    if tok in _ALL_OP_WORDS:
        raise ParseError(f"operator {tok!r} where a formula was expected", pos)
    if re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", tok):
        toks.take()
        return Atom(tok)
    raise ParseError(f"unexpected token {tok!r}", pos)


# ---------------------------------------------------------------------------
# printing

_PREC_IMPLIES, _PREC_OR, _PREC_AND, _PREC_BIN, _PREC_UNARY = 1, 2, 3, 4, 5


def _prec(phi: Formula) -> int:
    if isinstance(phi, Implies):
        return _PREC_IMPLIES
    if isinstance(phi, Or):
        return _PREC_OR
    if isinstance(phi, And):
        return _PREC_AND
    if isinstance(phi, (Until, Release, Since)):
        return _PREC_BIN
    if isinstance(phi, (Not, Next, WeakNext, Yesterday)):
        return _PREC_UNARY
    return 6


def to_text(phi: Formula, full_parens: bool = False) -> str:
    """Deterministic pretty-printer; re-parsing yields a structurally equal AST."""
    if isinstance(phi, TrueF):
        return "true"
    if isinstance(phi, FalseF):
        return "false"
    if isinstance(phi, Atom):
        return phi.name
    if isinstance(phi, (Not, Next, WeakNext, Yesterday)):
        op = {Not: "!", Next: "X", WeakNext: "N", Yesterday: "Y"}[type(phi)]
        inner = to_text(phi.child, full_parens)
        if full_parens or _prec(phi.child) < _PREC_UNARY:
            inner = f"({inner})"
        return f"{op}{inner}" if op == "!" else f"{op} {inner}"
    op = {And: "&", Or: "|", Implies: "->", Until: "U", Release: "R", Since: "S"}[type(phi)]
    prec = _prec(phi)
    # & and | are printed left-associatively, -> U R S right-associatively
    right_assoc = isinstance(phi, (Implies, Until, Release, Since))
    lhs = to_text(phi.left, full_parens)
    rhs = to_text(phi.right, full_parens)
    lp = _prec(phi.left) < prec or (right_assoc and _prec(phi.left) == prec)
    rp = _prec(phi.right) < prec or (not right_assoc and _prec(phi.right) == prec)
    if full_parens or lp:
        lhs = f"({lhs})"
    if full_parens or rp:
        rhs = f"({rhs})"
    return f"{lhs} {op} {rhs}"


# ---------------------------------------------------------------------------
# normal forms

def to_nnf(phi: Formula) -> Formula:
    """Push negation onto atoms, introducing the dual operators N and R."""
    if isinstance(phi, Not):
        return _nnf_neg(phi.child)
    if isinstance(phi, Implies):
        return Or(_nnf_neg(phi.left), to_nnf(phi.right))
    if isinstance(phi, (TrueF, FalseF, Atom)):
        return phi
    if isinstance(phi, And):
        return And(to_nnf(phi.left), to_nnf(phi.right))
    if isinstance(phi, Or):
        return Or(to_nnf(phi.left), to_nnf(phi.right))
    if isinstance(phi, Next):
        return Next(to_nnf(phi.child))
    if isinstance(phi, WeakNext):
        return WeakNext(to_nnf(phi.child))
    if isinstance(phi, Until):
        return Until(to_nnf(phi.left), to_nnf(phi.right))
    if isinstance(phi, Release):
        return Release(to_nnf(phi.left), to_nnf(phi.right))
    raise TypeError(f"not a future-dialect formula: {phi!r}")


def _nnf_neg(phi: Formula) -> Formula:
    if isinstance(phi, TrueF):
        return FALSE
    if isinstance(phi, FalseF):
        return TRUE
    if isinstance(phi, Atom):
        return Not(phi)
    if isinstance(phi, Not):
        return to_nnf(phi.child)
    if isinstance(phi, And):
        return Or(_nnf_neg(phi.left), _nnf_neg(phi.right))
    if isinstance(phi, Or):
        return And(_nnf_neg(phi.left), _nnf_neg(phi.right))
    if isinstance(phi, Implies):
        return And(to_nnf(phi.left), _nnf_neg(phi.right))
    if isinstance(phi, Next):
        return WeakNext(_nnf_neg(phi.child))  # !X a == N !a
    if isinstance(phi, WeakNext):
        return Next(_nnf_neg(phi.child))
    if isinstance(phi, Until):
        return Release(_nnf_neg(phi.left), _nnf_neg(phi.right))
    if isinstance(phi, Release):
        return Until(_nnf_neg(phi.left), _nnf_neg(phi.right))
    raise TypeError(f"not a future-dialect formula: {phi!r}")


def to_bnf(phi: Formula) -> Formula:
    """Rewrite using only true, false, atoms, !, &, |, X and U."""
    if isinstance(phi, (TrueF, FalseF, Atom)):
        return phi
    if isinstance(phi, Not):
        return Not(to_bnf(phi.child))
    if isinstance(phi, And):
        return And(to_bnf(phi.left), to_bnf(phi.right))
    if isinstance(phi, Or):
        return Or(to_bnf(phi.left), to_bnf(phi.right))
    if isinstance(phi, Implies):
        return Or(Not(to_bnf(phi.left)), to_bnf(phi.right))
    if isinstance(phi, Next):
        return Next(to_bnf(phi.child))
    if isinstance(phi, WeakNext):
        return Not(Next(Not(to_bnf(phi.child))))  # N a == !X!a
    if isinstance(phi, Until):
        return Until(to_bnf(phi.left), to_bnf(phi.right))
    if isinstance(phi, Release):
        return Not(Until(Not(to_bnf(phi.left)), Not(to_bnf(phi.right))))
    raise TypeError(f"not a future-dialect formula: {phi!r}")


# ---------------------------------------------------------------------------
# subformula closure

def is_atomic(phi: Formula) -> bool:
    return isinstance(phi, (TrueF, FalseF, Atom))


def is_fixpoint(phi: Formula) -> bool:
    """U-, R- and S-subformulas: the ones that get their own state/predicate."""
    return isinstance(phi, (Until, Release, Since))


@dataclass(frozen=True)
class Closure:
    """Distinct subformulas in post-order of first occurrence.

    `m` counts the non-atomic members, `n` the U/R (or S) members; the
    ordering fixes predicate and state-bit numbering everywhere downstream.
    """

    members: tuple[Formula, ...]
    non_atomic: tuple[Formula, ...]
    m: int
    n: int

    def index(self, phi: Formula) -> int:
        return self.members.index(phi)


def closure(phi: Formula) -> Closure:
    members: list[Formula] = []
    seen: set[Formula] = set()

    def walk(f: Formula) -> None:
        if f in seen:
            return
        for c in children(f):
            walk(c)
        seen.add(f)
        members.append(f)

    walk(phi)
    non_atomic = tuple(f for f in members if not is_atomic(f))
    n = sum(1 for f in non_atomic if is_fixpoint(f))
    return Closure(tuple(members), non_atomic, len(non_atomic), n)


# ---------------------------------------------------------------------------
# temporal reversal

def reverse_to_past(phi: Formula) -> Formula:
    """Map a future formula to its past mirror: X becomes Y, U becomes S.

    The input is first brought to BNF so only X and U need mapping; boolean
    structure is preserved verbatim.
    """
    return _reverse(to_bnf(phi))


def _reverse(phi: Formula) -> Formula:
    if isinstance(phi, (TrueF, FalseF, Atom)):
        return phi
    if isinstance(phi, Not):
        return Not(_reverse(phi.child))
    if isinstance(phi, And):
        return And(_reverse(phi.left), _reverse(phi.right))
    if isinstance(phi, Or):
        return Or(_reverse(phi.left), _reverse(phi.right))
    if isinstance(phi, Next):
        return Yesterday(_reverse(phi.child))
    if isinstance(phi, Until):
        return Since(_reverse(phi.left), _reverse(phi.right))
    raise TypeError(f"reversal expects BNF, got node {type(phi).__name__}")
