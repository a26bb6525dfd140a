"""Emission of first- and second-order encodings in MONA's M2L-STR syntax.

Output is a deterministic function of the inputs (byte-stable across runs):
a header, one free second-order variable per atom, and the encoded formula.
Atom names are emitted verbatim, quantified predicates as Q0, Q1, ...
(renamed away from the internal names, and shifted if an atom collides).
The compact encoding is deliberately not emitted; it is compiled in-process.
"""

from __future__ import annotations

from . import fol as fo
from . import formulas as fm
from . import mso
from .mso import EncodingConfig, encode_mso


def _term(t: fo.Term) -> str:
    if isinstance(t, fo.TVar):
        return t.name
    if isinstance(t, fo.TZero):
        return "0"
    if isinstance(t, fo.TLast):
        return "max($)"
    if isinstance(t, fo.TSucc):
        return f"{_term(t.base)}+1"
    if isinstance(t, fo.TPred):
        return f"{_term(t.base)}-1"
    raise TypeError(t)


def _fol_text(f: fo.Fol) -> str:
    if isinstance(f, fo.FTrue):
        return "true"
    if isinstance(f, fo.FFalse):
        return "false"
    if isinstance(f, fo.PredApp):
        return f"{_term(f.term)} in {f.pred}"
    if isinstance(f, fo.Cmp):
        if f.op == "!=":
            return f"~({_term(f.left)} = {_term(f.right)})"
        return f"{_term(f.left)} {f.op} {_term(f.right)}"
    if isinstance(f, fo.FNot):
        return f"~({_fol_text(f.child)})"
    if isinstance(f, fo.FAnd):
        return "(" + " & ".join(_fol_text(p) for p in f.parts) + ")"
    if isinstance(f, fo.FOr):
        return "(" + " | ".join(_fol_text(p) for p in f.parts) + ")"
    if isinstance(f, fo.FImplies):
        return f"({_fol_text(f.left)} => {_fol_text(f.right)})"
    if isinstance(f, fo.Exists):
        return f"(ex1 {f.var}: {_fol_text(f.body)})"
    if isinstance(f, fo.Forall):
        return f"(all1 {f.var}: {_fol_text(f.body)})"
    raise TypeError(f)


def _header(atoms) -> list[str]:
    lines = ["m2l-str;"]
    if atoms:
        lines.append("var2 " + ", ".join(atoms) + ";")
    return lines


def emit_fol(phi: fm.Formula, norm: str = "bnf") -> str:
    """MONA program asserting the future formula at position 0."""
    phi_n = mso.normalize(phi, norm)
    body = fo.encode_fol(phi_n)
    lines = _header(fm.alphabet(phi_n))
    lines.append(_fol_text(body) + ";")
    return "\n".join(lines) + "\n"


def emit_fol_past(phi: fm.Formula) -> str:
    """MONA program for the past mirror of the formula, asserted at the last
    position; this is the program whose automaton gets reversed downstream."""
    psi = fm.reverse_to_past(phi)
    body = fo.encode_fol_past(psi)
    lines = _header(fm.alphabet(psi))
    lines.append(_fol_text(body) + ";")
    return "\n".join(lines) + "\n"


def _qnames(sentence: mso.MonadicSentence) -> dict[str, str]:
    taken = set(sentence.atoms)
    out = {}
    for i, q in enumerate(sentence.quantified):
        name = f"Q{i}"
        while name in taken:
            name = "_" + name
        taken.add(name)
        out[q] = name
    return out


def _set_text(t: mso.SetTerm, names: dict[str, str]) -> str:
    if isinstance(t, mso.SPred):
        return names.get(t.name, t.name)
    if isinstance(t, mso.SAlive):
        return "$"
    if isinstance(t, mso.SEmpty):
        return "empty"
    if isinstance(t, mso.SLastOnly):
        return "{max($)}"
    if isinstance(t, mso.SShift):
        return f"({_set_text(t.base, names)} - 1)"
    if isinstance(t, mso.SUnion):
        return f"({_set_text(t.left, names)} union {_set_text(t.right, names)})"
    if isinstance(t, mso.SInter):
        return f"({_set_text(t.left, names)} inter {_set_text(t.right, names)})"
    if isinstance(t, mso.SDiff):
        return f"({_set_text(t.left, names)} \\ {_set_text(t.right, names)})"
    raise TypeError(t)


def _mexpr_text(e: mso.MExpr, names: dict[str, str], pos: str) -> str:
    if isinstance(e, mso.MTrue):
        return "true"
    if isinstance(e, mso.MFalse):
        return "false"
    if isinstance(e, mso.Member):
        at = {0: pos, 1: f"{pos}+1", -1: f"{pos}-1"}[e.offset]
        return f"{at} in {_set_text(e.term, names)}"
    if isinstance(e, mso.Guard):
        return {
            "first": f"{pos} = 0",
            "last": f"{pos} = max($)",
            "not_last": f"~({pos} = max($))",
            "positive": f"0 < {pos}",
        }[e.kind]
    if isinstance(e, mso.MNot):
        return f"~({_mexpr_text(e.child, names, pos)})"
    if isinstance(e, mso.MAnd):
        return "(" + " & ".join(_mexpr_text(p, names, pos) for p in e.parts) + ")"
    if isinstance(e, mso.MOr):
        return "(" + " | ".join(_mexpr_text(p, names, pos) for p in e.parts) + ")"
    if isinstance(e, mso.MImplies):
        return f"({_mexpr_text(e.left, names, pos)} => {_mexpr_text(e.right, names, pos)})"
    if isinstance(e, mso.MIff):
        return f"({_mexpr_text(e.left, names, pos)} <=> {_mexpr_text(e.right, names, pos)})"
    raise TypeError(e)


def emit_mso(phi: fm.Formula, cfg: EncodingConfig) -> str:
    """MONA program with one ex2 block and one all1 block."""
    sentence = encode_mso(phi, cfg)
    names = _qnames(sentence)
    init = _mexpr_text(sentence.init, names, "0")
    lines = _header(sentence.atoms)
    if sentence.clauses:
        matrix = " & ".join(_mexpr_text(c, names, "x") for c in sentence.clauses)
        body = f"({init} & (all1 x: ({matrix})))"
    else:
        body = init
    if sentence.quantified:
        quant = ", ".join(names[q] for q in sentence.quantified)
        body = f"ex2 {quant}: {body}"
    lines.append(body + ";")
    return "\n".join(lines) + "\n"
