"""Ground-truth finite-trace evaluation and the bounded-language oracle.

A trace is a non-empty tuple of letters, each letter a frozenset of atom
names.  Everything downstream (every encoding, every automaton) is judged
against `eval_ltlf_at` / `eval_pltlf_at`; the empty trace belongs to no
language, so all automata here reject it.

Text format: one trace per line, letters split by ';', atoms inside a
letter by ','; the empty letter is written '-'.  Example: ``a;a,b`` is the
two-letter trace [{a}, {a,b}].
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product

from . import formulas as fm
from .errors import BudgetExceededError

Trace = tuple[frozenset[str], ...]

DEFAULT_ENUM_CAP = 2_000_000


def make_trace(*letters) -> Trace:
    return tuple(frozenset(l) for l in letters)


def reverse_trace(rho: Trace) -> Trace:
    return tuple(reversed(rho))


def parse_trace(text: str) -> Trace:
    parts = [p for p in text.strip().split(";") if p != ""]
    if not parts:
        raise ValueError("a trace has at least one letter")
    letters = []
    for part in parts:
        if part == "-":
            letters.append(frozenset())
        else:
            letters.append(frozenset(a.strip() for a in part.split(",") if a.strip()))
    return tuple(letters)


def format_trace(rho: Trace) -> str:
    return ";".join("-" if not l else ",".join(sorted(l)) for l in rho)


def eval_ltlf_at(rho: Trace, phi: fm.Formula, x: int) -> bool:
    """Truth of the future formula at position x; X is strict, N is weak."""
    if not 0 <= x < len(rho):
        raise IndexError(f"position {x} outside trace of length {len(rho)}")
    last = len(rho) - 1
    if isinstance(phi, fm.TrueF):
        return True
    if isinstance(phi, fm.FalseF):
        return False
    if isinstance(phi, fm.Atom):
        return phi.name in rho[x]
    if isinstance(phi, fm.Not):
        return not eval_ltlf_at(rho, phi.child, x)
    if isinstance(phi, fm.And):
        return eval_ltlf_at(rho, phi.left, x) and eval_ltlf_at(rho, phi.right, x)
    if isinstance(phi, fm.Or):
        return eval_ltlf_at(rho, phi.left, x) or eval_ltlf_at(rho, phi.right, x)
    if isinstance(phi, fm.Implies):
        return (not eval_ltlf_at(rho, phi.left, x)) or eval_ltlf_at(rho, phi.right, x)
    if isinstance(phi, fm.Next):
        return x < last and eval_ltlf_at(rho, phi.child, x + 1)
    if isinstance(phi, fm.WeakNext):
        return x == last or eval_ltlf_at(rho, phi.child, x + 1)
    if isinstance(phi, fm.Until):
        for y in range(x, last + 1):
            if eval_ltlf_at(rho, phi.right, y):
                return all(eval_ltlf_at(rho, phi.left, z) for z in range(x, y))
        return False
    if isinstance(phi, fm.Release):
        for y in range(x, last + 1):
            if not eval_ltlf_at(rho, phi.right, y):
                return any(eval_ltlf_at(rho, phi.left, z) for z in range(x, y))
        return True
    raise TypeError(f"not a future-dialect formula: {phi!r}")


def eval_pltlf_at(rho: Trace, psi: fm.Formula, x: int) -> bool:
    """Truth of the past formula at position x; top-level truth is at the last position."""
    if not 0 <= x < len(rho):
        raise IndexError(f"position {x} outside trace of length {len(rho)}")
    if isinstance(psi, fm.TrueF):
        return True
    if isinstance(psi, fm.FalseF):
        return False
    if isinstance(psi, fm.Atom):
        return psi.name in rho[x]
    if isinstance(psi, fm.Not):
        return not eval_pltlf_at(rho, psi.child, x)
    if isinstance(psi, fm.And):
        return eval_pltlf_at(rho, psi.left, x) and eval_pltlf_at(rho, psi.right, x)
    if isinstance(psi, fm.Or):
        return eval_pltlf_at(rho, psi.left, x) or eval_pltlf_at(rho, psi.right, x)
    if isinstance(psi, fm.Yesterday):
        return x - 1 >= 0 and eval_pltlf_at(rho, psi.child, x - 1)
    if isinstance(psi, fm.Since):
        for y in range(x, -1, -1):
            if eval_pltlf_at(rho, psi.right, y):
                return all(eval_pltlf_at(rho, psi.left, z) for z in range(y + 1, x + 1))
        return False
    raise TypeError(f"not a past-dialect formula: {psi!r}")


def holds(rho: Trace, phi: fm.Formula, dialect: str = "ltlf") -> bool:
    """Top-level satisfaction: future formulas at 0, past formulas at last.

    Pure boolean formulas belong to both dialects, so the evaluation point
    has to be named explicitly.
    """
    if dialect == "ltlf":
        return eval_ltlf_at(rho, phi, 0)
    if dialect == "pltlf":
        return eval_pltlf_at(rho, phi, len(rho) - 1)
    raise ValueError(f"unknown dialect {dialect!r}")


def all_traces(atom_names, max_len: int, cap: int = DEFAULT_ENUM_CAP):
    """Every trace of length 1..max_len over the alphabet, in lexicographic order."""
    names = tuple(sorted(atom_names))
    letters = [frozenset(c) for c in _letters(names)]
    total = sum(len(letters) ** L for L in range(1, max_len + 1))
    if total > cap:
        raise BudgetExceededError(
            f"enumerating {total} traces exceeds the cap of {cap}"
        )
    for length in range(1, max_len + 1):
        for combo in product(letters, repeat=length):
            yield combo


def _letters(names: tuple[str, ...]):
    for bits in range(1 << len(names)):
        yield tuple(names[i] for i in range(len(names)) if bits >> i & 1)


def bounded_language(phi: fm.Formula, max_len: int, atom_names=None,
                     dialect: str = "ltlf",
                     cap: int = DEFAULT_ENUM_CAP) -> list[Trace]:
    """Satisfying traces of length 1..max_len, the universal brute-force oracle."""
    if atom_names is None:
        atom_names = fm.atoms(phi)
    return [rho for rho in all_traces(atom_names, max_len, cap)
            if holds(rho, phi, dialect)]


def subformula_truth(rho: Trace, phi: fm.Formula) -> dict[fm.Formula, tuple[bool, ...]]:
    """Truth vector of every closure member at every position.

    Computed by the fixpoint recurrences (U and R backward, S forward), one
    pass per member, so bulk checks stay cheap; the quantifier-based
    evaluators above remain the defining semantics and the two are tested
    against each other.
    """
    n = len(rho)
    last = n - 1
    vec: dict[fm.Formula, tuple[bool, ...]] = {}
    for theta in fm.closure(phi).members:  # post-order: children come first
        if isinstance(theta, fm.TrueF):
            v = (True,) * n
        elif isinstance(theta, fm.FalseF):
            v = (False,) * n
        elif isinstance(theta, fm.Atom):
            v = tuple(theta.name in rho[x] for x in range(n))
        elif isinstance(theta, fm.Not):
            v = tuple(not b for b in vec[theta.child])
        elif isinstance(theta, fm.And):
            v = tuple(a and b for a, b in zip(vec[theta.left], vec[theta.right]))
        elif isinstance(theta, fm.Or):
            v = tuple(a or b for a, b in zip(vec[theta.left], vec[theta.right]))
        elif isinstance(theta, fm.Implies):
            v = tuple((not a) or b for a, b in zip(vec[theta.left], vec[theta.right]))
        elif isinstance(theta, fm.Next):
            c = vec[theta.child]
            v = tuple(x < last and c[x + 1] for x in range(n))
        elif isinstance(theta, fm.WeakNext):
            c = vec[theta.child]
            v = tuple(x == last or c[x + 1] for x in range(n))
        elif isinstance(theta, fm.Until):
            l, r = vec[theta.left], vec[theta.right]
            acc = [False] * n
            acc[last] = r[last]
            for x in range(last - 1, -1, -1):
                acc[x] = r[x] or (l[x] and acc[x + 1])
            v = tuple(acc)
        elif isinstance(theta, fm.Release):
            l, r = vec[theta.left], vec[theta.right]
            acc = [False] * n
            acc[last] = r[last]
            for x in range(last - 1, -1, -1):
                acc[x] = r[x] and (l[x] or acc[x + 1])
            v = tuple(acc)
        elif isinstance(theta, fm.Yesterday):
            c = vec[theta.child]
            v = tuple(x > 0 and c[x - 1] for x in range(n))
        elif isinstance(theta, fm.Since):
            l, r = vec[theta.left], vec[theta.right]
            acc = [False] * n
            acc[0] = r[0]
            for x in range(1, n):
                acc[x] = r[x] or (l[x] and acc[x - 1])
            v = tuple(acc)
        else:
            raise TypeError(theta)
        vec[theta] = v
    return vec


# ---------------------------------------------------------------------------
# the logical mirror of a trace

@dataclass
class MonadicStructure:
    """Finite linear order 0..last with one unary predicate extent per name."""

    size: int
    extents: dict[str, frozenset[int]] = field(default_factory=dict)

    @property
    def last(self) -> int:
        return self.size - 1

    def extent(self, name: str) -> frozenset[int]:
        try:
            return self.extents[name]
        except KeyError:
            raise KeyError(f"unknown predicate {name!r}") from None

    @classmethod
    def from_trace(cls, rho: Trace, atom_names=None) -> "MonadicStructure":
        if atom_names is None:
            atom_names = set().union(*rho) if rho else set()
        extents = {
            p: frozenset(x for x, letter in enumerate(rho) if p in letter)
            for p in sorted(atom_names)
        }
        return cls(len(rho), extents)

    def extended(self, more: dict[str, frozenset[int]]) -> "MonadicStructure":
        merged = dict(self.extents)
        merged.update(more)
        return MonadicStructure(self.size, merged)
