"""Translation pipelines and their cross-validation.

Four routes produce a minimized DFA for a future formula:

  reverse       past mirror -> symbolic DFA -> explicit -> reversal ->
                subset construction -> minimize;
  mso-<v>       one of six second-order encodings compiled directly;
  cmso-<f>      the BDD-derived reversal sentence (fussy/sloppy) compiled;

plus the first-order route, which is emitted (MONA syntax) and evaluated
against traces rather than compiled.  `check_corpus` runs everything on a
corpus and demands one canonical automaton per formula plus agreement with
the trace semantics; `bench_rows` times the routes and reports sizes.
"""

from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from . import formulas as fm
from .automata import ExplicitDfa, determinize, is_empty, is_universal, minimize, reverse, accepts
from .compact import build_rev
from .compiler import (DEFAULT_COMPILE_STATE_CAP, DEFAULT_WIDTH_CAP,
                       compile_with_stats)
from .errors import BudgetExceededError, DeadlineExceededError
from .fol import encode_fol, encode_fol_past, eval_fol
from .mso import ALL_CONFIGS, EncodingConfig, _encode_unchecked, encode_mso
from .symbolic import (explicit_to_symbolic, pltlf_to_symbolic_dfa,
                       symbolic_to_explicit)
from .traces import (MonadicStructure, all_traces, eval_ltlf_at, eval_pltlf_at)


class Deadline:
    __slots__ = ("expiry",)

    def __init__(self, timeout_ms: float):
        self.expiry = time.monotonic() + timeout_ms / 1000.0

    def check(self) -> None:
        if time.monotonic() > self.expiry:
            raise DeadlineExceededError("stage deadline expired")


@dataclass(frozen=True)
class Budgets:
    enum_cap: int = 2_000_000
    brute_bits: int = 20
    node_cap: int = 1 << 20
    state_cap: int = 1_000_000
    width_cap: int = DEFAULT_WIDTH_CAP
    compile_state_cap: int = DEFAULT_COMPILE_STATE_CAP

    @classmethod
    def from_mapping(cls, mapping: dict[str, str]) -> "Budgets":
        known = {f.name for f in cls.__dataclass_fields__.values()}
        bad = set(mapping) - known
        if bad:
            raise ValueError(f"unknown budget keys: {sorted(bad)}")
        return cls(**{k: int(v) for k, v in mapping.items()})


MSO_PIPELINES = tuple(f"mso-{cfg.name}" for cfg in ALL_CONFIGS)
CMSO_PIPELINES = ("cmso-fussy", "cmso-sloppy")
DFA_PIPELINES = ("reverse",) + MSO_PIPELINES + CMSO_PIPELINES


@dataclass
class Translation:
    dfa: ExplicitDfa
    quantifiers: int
    clauses: int
    intermediate: int


def translate(phi: fm.Formula, pipeline: str, budgets: Budgets = Budgets(),
              deadline: Deadline | None = None, _fault: bool = False) -> Translation:
    """Run one DFA pipeline; every route shares the formula's own alphabet."""
    atom_names = fm.alphabet(phi)
    if pipeline == "reverse":
        psi = fm.reverse_to_past(phi)
        sdfa = pltlf_to_symbolic_dfa(psi, atom_names, node_cap=budgets.node_cap)
        explicit = symbolic_to_explicit(sdfa, budgets.state_cap, deadline)
        det = determinize(reverse(explicit), budgets.state_cap, deadline)
        dfa = minimize(det, deadline)
        return Translation(dfa, sdfa.k, 0, max(explicit.n_states, det.n_states))
    if pipeline.startswith("mso-"):
        norm, constraint, variables = pipeline[len("mso-"):].split("-")
        if _fault:
            # test-only: force the forbidden constraint swap on bnf input
            sentence = _encode_unchecked(phi, "bnf", "sloppy", variables, atom_names)
        else:
            cfg = EncodingConfig(norm, constraint, variables)
            sentence = encode_mso(phi, cfg, atom_names)
        dfa, stats = compile_with_stats(
            sentence, width_cap=budgets.width_cap,
            state_cap=budgets.compile_state_cap, deadline=deadline)
        return Translation(dfa, sentence.quantifier_count, sentence.clause_count,
                           stats.det_states)
    if pipeline.startswith("cmso-"):
        flavor = pipeline[len("cmso-"):]
        rev = rev_sentence_for(phi, flavor, budgets, deadline)
        dfa, stats = compile_with_stats(
            rev.sentence, width_cap=budgets.width_cap,
            state_cap=budgets.compile_state_cap, deadline=deadline)
        return Translation(dfa, rev.quantifier_count, rev.clause_count,
                           stats.det_states)
    raise ValueError(f"unknown pipeline {pipeline!r}")


def rev_sentence_for(phi: fm.Formula, flavor: str, budgets: Budgets = Budgets(),
                     deadline: Deadline | None = None):
    """The compact second-order sentence of a future formula.

    The symbolic automaton handed to the reversal encoding is the minimized
    one with a log-size state encoding, mirroring what the external automaton
    builder would return; that keeps the node count, and with it the number
    of quantified predicates, small.
    """
    atom_names = fm.alphabet(phi)
    psi = fm.reverse_to_past(phi)
    raw = pltlf_to_symbolic_dfa(psi, atom_names, node_cap=budgets.node_cap)
    explicit = symbolic_to_explicit(raw, budgets.state_cap, deadline)
    compacted = explicit_to_symbolic(minimize(explicit, deadline), budgets.node_cap)
    return build_rev(compacted, flavor)


@dataclass
class Outcome:
    pipeline: str
    status: str  # ok | budget | timeout
    quantifiers: int = 0
    clauses: int = 0
    intermediate: int = 0
    final_states: int = 0
    final_transitions: int = 0
    millis: float = 0.0
    error: str = ""
    dfa: ExplicitDfa | None = None


def run_pipeline(phi: fm.Formula, pipeline: str, budgets: Budgets = Budgets(),
                 timeout_ms: float | None = None, _fault: bool = False) -> Outcome:
    deadline = Deadline(timeout_ms) if timeout_ms else None
    started = time.monotonic()
    try:
        tr = translate(phi, pipeline, budgets, deadline, _fault=_fault)
    except BudgetExceededError as exc:
        return Outcome(pipeline, "budget", error=str(exc),
                       millis=(time.monotonic() - started) * 1000)
    except DeadlineExceededError:
        return Outcome(pipeline, "timeout",
                       millis=(time.monotonic() - started) * 1000)
    millis = (time.monotonic() - started) * 1000
    return Outcome(pipeline, "ok", tr.quantifiers, tr.clauses, tr.intermediate,
                   tr.dfa.n_states, tr.dfa.n_transitions, millis, dfa=tr.dfa)


# corpus ---------------------------------------------------------------------

def gen_pattern(family: str, n: int) -> fm.Formula:
    """One scalable pattern instance; families: conj-F, resp-chain, u-nest."""
    if n < 1:
        raise ValueError("pattern scale starts at 1")
    if family == "conj-F":
        out = fm.Until(fm.TRUE, fm.Atom("p1"))
        for i in range(2, n + 1):
            out = fm.And(out, fm.Until(fm.TRUE, fm.Atom(f"p{i}")))
        return out
    if family == "resp-chain":
        def link(i):
            return fm.Release(fm.FALSE, fm.Implies(
                fm.Atom(f"p{i}"), fm.Until(fm.TRUE, fm.Atom(f"q{i}"))))
        out = link(1)
        for i in range(2, n + 1):
            out = fm.And(out, link(i))
        return out
    if family == "u-nest":
        out = fm.Atom(f"p{n + 1}")
        for i in range(n, 0, -1):
            out = fm.Until(fm.Atom(f"p{i}"), out)
        return out
    raise ValueError(f"unknown pattern family {family!r}")


def gen_patterns(family: str, n: int) -> list[fm.Formula]:
    return [gen_pattern(family, i) for i in range(1, n + 1)]


_HAND_PICKED = (
    "a", "true", "false", "!a",
    "a & b", "a | b", "a -> b", "X a",
    "N a", "F a", "G a", "a U b",
    "a R b", "!F a", "G(a -> X b)", "a U (b U c)",
    "!(a U b)", "!(a & b)", "X X a", "N N a",
    "X N a", "F G a", "G F a", "F(a & b)",
    "G(a | b)", "a & X a", "a | X b", "X(a U b)",
    "(a U b) U c", "a R (b R c)", "(a R b) | (a U b)", "a -> X a",
    "G(a -> b)", "F(a -> b)", "F a & G b", "F a | G b",
    "(a & b) U c", "a U (b & c)", "!G a", "N(a U b)",
    "G a | F b",
)


def default_corpus() -> list[fm.Formula]:
    """The 50-formula cross-validation corpus: pattern instances up to scale 3
    woven between hand-picked formulas, small and large alternating."""
    hand = [fm.parse(t) for t in _HAND_PICKED]
    patterns = [gen_pattern(f, i) for i in (1, 2, 3)
                for f in ("conj-F", "resp-chain", "u-nest")]
    out: list[fm.Formula] = []
    pi = 0
    for i, phi in enumerate(hand):
        out.append(phi)
        if (i + 1) % 4 == 0 and pi < len(patterns):
            out.append(patterns[pi])
            pi += 1
    out.extend(patterns[pi:])
    return out


def usable_trace_len(n_atoms: int, max_len: int, trace_budget: int = 6000) -> int:
    """Longest bound whose full trace enumeration stays within the budget."""
    total, best = 0, 1
    for length in range(1, max_len + 1):
        total += (1 << n_atoms) ** length
        if total > trace_budget and length > 1:
            break
        best = length
    return best


@dataclass
class FormulaCheck:
    formula: str
    outcomes: dict[str, Outcome]
    consistent: bool
    problems: list[str]
    unsat: bool
    valid: bool
    trace_len: int


def check_formula(phi: fm.Formula, trace_len: int = 4,
                  budgets: Budgets = Budgets(), inject_fault: bool = False,
                  timeout_ms: float | None = None) -> FormulaCheck:
    outcomes: dict[str, Outcome] = {}
    for pipeline in DFA_PIPELINES:
        fault = inject_fault and pipeline == "mso-bnf-fussy-full"
        outcomes[pipeline] = run_pipeline(phi, pipeline, budgets, timeout_ms,
                                          _fault=fault)
    problems: list[str] = []
    ok = [o for o in outcomes.values() if o.status == "ok"]
    reference = ok[0].dfa if ok else None
    for o in ok[1:]:
        if o.dfa != reference:
            problems.append(f"{o.pipeline} disagrees with {ok[0].pipeline}")

    bound = usable_trace_len(len(fm.alphabet(phi)), trace_len)
    distinct = {o.dfa: o for o in ok}
    fol_bnf = encode_fol(fm.to_bnf(phi))
    fol_nnf = encode_fol(fm.to_nnf(phi))
    psi = fm.reverse_to_past(phi)
    folp = encode_fol_past(psi)
    for rho in all_traces(fm.alphabet(phi), bound, budgets.enum_cap):
        expected = eval_ltlf_at(rho, phi, 0)
        for o in distinct.values():
            if accepts(o.dfa, rho) != expected:
                problems.append(f"{o.pipeline} wrong on trace {rho!r}")
                break
        struct = MonadicStructure.from_trace(rho, fm.alphabet(phi))
        if eval_fol(struct, fol_bnf) != expected:
            problems.append(f"fol-bnf wrong on trace {rho!r}")
        if eval_fol(struct, fol_nnf) != expected:
            problems.append(f"fol-nnf wrong on trace {rho!r}")
        if eval_pltlf_at(rho, psi, len(rho) - 1) != eval_fol(struct, folp):
            problems.append(f"fol-past wrong on trace {rho!r}")
        if len(problems) > 8:
            break

    unsat = is_empty(reference) if reference is not None else False
    valid = is_universal(reference) if reference is not None else False
    return FormulaCheck(fm.to_text(phi), outcomes, not problems, problems,
                        unsat, valid, bound)


def _check_worker(args) -> FormulaCheck:
    text, trace_len, budgets, inject = args
    return check_formula(fm.parse(text), trace_len, budgets, inject)


def check_corpus(formulas, trace_len: int = 4, budgets: Budgets = Budgets(),
                 inject_fault: bool = False, workers: int = 1) -> list[FormulaCheck]:
    formulas = list(formulas)
    if workers > 1:
        jobs = [(fm.to_text(phi), trace_len, budgets, inject_fault)
                for phi in formulas]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_check_worker, jobs))
    else:
        results = [check_formula(phi, trace_len, budgets, inject_fault)
                   for phi in formulas]
    return sorted(results, key=lambda r: r.formula)


# benchmarking ----------------------------------------------------------------

BENCH_COLUMNS = ("formula", "pipeline", "variation", "quantifiers", "clauses",
                 "intermediate_max_states", "final_states", "final_transitions",
                 "millis")


def _split_name(pipeline: str) -> tuple[str, str]:
    if pipeline == "reverse":
        return "reverse", "-"
    kind, _, variation = pipeline.partition("-")
    return kind, variation


def bench_rows(formulas, budgets: Budgets = Budgets(),
               timeout_ms: float | None = None, workers: int = 1) -> list[dict]:
    formulas = list(formulas)
    if workers > 1:
        jobs = [(fm.to_text(phi), budgets, timeout_ms) for phi in formulas]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            grouped = list(pool.map(_bench_worker, jobs))
        rows = [row for group in grouped for row in group]
    else:
        rows = []
        for phi in formulas:
            rows.extend(_bench_one(phi, budgets, timeout_ms))
    rows.sort(key=lambda r: (r["formula"], r["pipeline"], r["variation"]))
    return rows


def _bench_worker(args) -> list[dict]:
    text, budgets, timeout_ms = args
    return _bench_one(fm.parse(text), budgets, timeout_ms)


def _bench_one(phi: fm.Formula, budgets: Budgets,
               timeout_ms: float | None) -> list[dict]:
    rows = []
    text = fm.to_text(phi)
    for pipeline in DFA_PIPELINES:
        o = run_pipeline(phi, pipeline, budgets, timeout_ms)
        kind, variation = _split_name(pipeline)
        if o.status == "ok":
            cells = (o.quantifiers, o.clauses, o.intermediate, o.final_states,
                     o.final_transitions, f"{o.millis:.1f}")
        else:
            mark = "TIMEOUT" if o.status == "timeout" else "BUDGET"
            cells = (mark,) * 6
        rows.append(dict(zip(BENCH_COLUMNS, (text, kind, variation, *cells))))
    return rows


def rows_to_csv(rows) -> str:
    import csv
    import io

    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=BENCH_COLUMNS)
    writer.writeheader()
    for row in rows:
        writer.writerow(row)
    return buf.getvalue()
