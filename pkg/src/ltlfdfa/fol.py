"""First-order encodings of future and past formulas over finite linear orders.

`encode_fol` asserts the truth of a future formula at position 0,
`encode_fol_past` the truth of a past formula at the last position; both
produce closed first-order formulas over the monadic predicates of the
atoms, evaluated by `eval_fol` (plain Tarskian evaluation, quantifiers
range over 0..last).
"""

from __future__ import annotations

from dataclasses import dataclass

from . import formulas as fm
from .traces import MonadicStructure


# terms -------------------------------------------------------------------

@dataclass(frozen=True)
class Term:
    pass


@dataclass(frozen=True)
class TVar(Term):
    name: str


@dataclass(frozen=True)
class TZero(Term):
    pass


@dataclass(frozen=True)
class TLast(Term):
    pass


@dataclass(frozen=True)
class TSucc(Term):
    base: Term


@dataclass(frozen=True)
class TPred(Term):
    base: Term


# formulas ----------------------------------------------------------------

@dataclass(frozen=True)
class Fol:
    pass


@dataclass(frozen=True)
class FTrue(Fol):
    pass


@dataclass(frozen=True)
class FFalse(Fol):
    pass


@dataclass(frozen=True)
class PredApp(Fol):
    pred: str
    term: Term


@dataclass(frozen=True)
class Cmp(Fol):
    op: str  # '=', '!=', '<', '<='
    left: Term
    right: Term


@dataclass(frozen=True)
class FNot(Fol):
    child: Fol


@dataclass(frozen=True)
class FAnd(Fol):
    parts: tuple[Fol, ...]


@dataclass(frozen=True)
class FOr(Fol):
    parts: tuple[Fol, ...]


@dataclass(frozen=True)
class FImplies(Fol):
    left: Fol
    right: Fol


@dataclass(frozen=True)
class Exists(Fol):
    var: str
    body: Fol


@dataclass(frozen=True)
class Forall(Fol):
    var: str
    body: Fol


def fand(*parts: Fol) -> Fol:
    return FAnd(tuple(parts))


def f_or(*parts: Fol) -> Fol:
    return FOr(tuple(parts))


# encoding ----------------------------------------------------------------

class _Fresh:
    def __init__(self):
        self.count = 0

    def var(self) -> str:
        name = f"v{self.count}"
        self.count += 1
        return name


def encode_fol(phi: fm.Formula) -> Fol:
    """fol(phi, 0): the future formula's truth asserted at position 0."""
    return _fol(phi, TZero(), _Fresh())


def _fol(phi: fm.Formula, x: Term, fresh: _Fresh) -> Fol:
    if isinstance(phi, fm.TrueF):
        return FTrue()
    if isinstance(phi, fm.FalseF):
        return FFalse()
    if isinstance(phi, fm.Atom):
        return PredApp(phi.name, x)
    if isinstance(phi, fm.Not):
        return FNot(_fol(phi.child, x, fresh))
    if isinstance(phi, fm.And):
        return fand(_fol(phi.left, x, fresh), _fol(phi.right, x, fresh))
    if isinstance(phi, fm.Or):
        return f_or(_fol(phi.left, x, fresh), _fol(phi.right, x, fresh))
    if isinstance(phi, fm.Implies):
        return FImplies(_fol(phi.left, x, fresh), _fol(phi.right, x, fresh))
    if isinstance(phi, fm.Next):
        y = fresh.var()
        return Exists(y, fand(Cmp("=", TVar(y), TSucc(x)), _fol(phi.child, TVar(y), fresh)))
    if isinstance(phi, fm.WeakNext):
        y = fresh.var()
        return f_or(
            Cmp("=", x, TLast()),
            Exists(y, fand(Cmp("=", TVar(y), TSucc(x)), _fol(phi.child, TVar(y), fresh))),
        )
    if isinstance(phi, fm.Until):
        y, z = fresh.var(), fresh.var()
        return Exists(y, fand(
            Cmp("<=", x, TVar(y)),
            Cmp("<=", TVar(y), TLast()),
            _fol(phi.right, TVar(y), fresh),
            Forall(z, FImplies(
                fand(Cmp("<=", x, TVar(z)), Cmp("<", TVar(z), TVar(y))),
                _fol(phi.left, TVar(z), fresh),
            )),
        ))
    if isinstance(phi, fm.Release):
        y, z, w = fresh.var(), fresh.var(), fresh.var()
        return f_or(
            Exists(y, fand(
                Cmp("<=", x, TVar(y)),
                Cmp("<=", TVar(y), TLast()),
                _fol(phi.left, TVar(y), fresh),
                Forall(z, FImplies(
                    fand(Cmp("<=", x, TVar(z)), Cmp("<=", TVar(z), TVar(y))),
                    _fol(phi.right, TVar(z), fresh),
                )),
            )),
            Forall(w, FImplies(
                fand(Cmp("<=", x, TVar(w)), Cmp("<=", TVar(w), TLast())),
                _fol(phi.right, TVar(w), fresh),
            )),
        )
    raise TypeError(f"not a future-dialect formula: {phi!r}")


def encode_fol_past(psi: fm.Formula) -> Fol:
    """fol_p(psi, last): the past formula's truth asserted at the last position."""
    return _fol_past(psi, TLast(), _Fresh())


def _fol_past(psi: fm.Formula, x: Term, fresh: _Fresh) -> Fol:
    if isinstance(psi, fm.TrueF):
        return FTrue()
    if isinstance(psi, fm.FalseF):
        return FFalse()
    if isinstance(psi, fm.Atom):
        return PredApp(psi.name, x)
    if isinstance(psi, fm.Not):
        return FNot(_fol_past(psi.child, x, fresh))
    if isinstance(psi, fm.And):
        return fand(_fol_past(psi.left, x, fresh), _fol_past(psi.right, x, fresh))
    if isinstance(psi, fm.Or):
        return f_or(_fol_past(psi.left, x, fresh), _fol_past(psi.right, x, fresh))
    if isinstance(psi, fm.Yesterday):
        y = fresh.var()
        return Exists(y, fand(
            Cmp("=", TVar(y), TPred(x)),
            Cmp("<=", TZero(), TVar(y)),
            _fol_past(psi.child, TVar(y), fresh),
        ))
    if isinstance(psi, fm.Since):
        y, z = fresh.var(), fresh.var()
        return Exists(y, fand(
            Cmp("<=", TZero(), TVar(y)),
            Cmp("<=", TVar(y), x),
            _fol_past(psi.right, TVar(y), fresh),
            Forall(z, FImplies(
                fand(Cmp("<", TVar(y), TVar(z)), Cmp("<=", TVar(z), x)),
                _fol_past(psi.left, TVar(z), fresh),
            )),
        ))
    raise TypeError(f"not a past-dialect formula: {psi!r}")


# evaluation --------------------------------------------------------------

def eval_term(t: Term, env: dict[str, int], last: int) -> int:
    if isinstance(t, TVar):
        return env[t.name]
    if isinstance(t, TZero):
        return 0
    if isinstance(t, TLast):
        return last
    if isinstance(t, TSucc):
        return eval_term(t.base, env, last) + 1
    if isinstance(t, TPred):
        return eval_term(t.base, env, last) - 1
    raise TypeError(t)


def eval_fol(struct: MonadicStructure, f: Fol, env: dict[str, int] | None = None) -> bool:
    """Evaluate a first-order formula over the structure; quantifiers range 0..last."""
    env = env or {}
    last = struct.last
    if isinstance(f, FTrue):
        return True
    if isinstance(f, FFalse):
        return False
    if isinstance(f, PredApp):
        return eval_term(f.term, env, last) in struct.extent(f.pred)
    if isinstance(f, Cmp):
        a = eval_term(f.left, env, last)
        b = eval_term(f.right, env, last)
        return {"=": a == b, "!=": a != b, "<": a < b, "<=": a <= b}[f.op]
    if isinstance(f, FNot):
        return not eval_fol(struct, f.child, env)
    if isinstance(f, FAnd):
        return all(eval_fol(struct, p, env) for p in f.parts)
    if isinstance(f, FOr):
        return any(eval_fol(struct, p, env) for p in f.parts)
    if isinstance(f, FImplies):
        return (not eval_fol(struct, f.left, env)) or eval_fol(struct, f.right, env)
    if isinstance(f, Exists):
        return any(eval_fol(struct, f.body, {**env, f.var: v}) for v in range(struct.size))
    if isinstance(f, Forall):
        return all(eval_fol(struct, f.body, {**env, f.var: v}) for v in range(struct.size))
    raise TypeError(f)
