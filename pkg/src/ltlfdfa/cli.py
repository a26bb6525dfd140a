"""Command-line front end.

Exit codes: 0 success, 1 cross-validation found an inconsistency,
2 invalid configuration or formula, 3 a resource budget was exhausted.
"""

from __future__ import annotations

import argparse
import sys

from . import formulas as fm
from . import mona
from .automata import to_dot, to_explicit_text
from .errors import BudgetExceededError, ParseError
from .mso import EncodingConfig
from .pipelines import (Budgets, bench_rows, check_corpus, default_corpus,
                        gen_patterns, rows_to_csv, run_pipeline)

_CAP_FLAGS = ("enum_cap", "brute_bits", "node_cap", "state_cap", "width_cap",
              "compile_state_cap")


def _add_budget_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="key=value file with budget caps; flags override")
    for name in _CAP_FLAGS:
        p.add_argument(f"--{name.replace('_', '-')}", type=int, default=None)


def _budgets(args) -> Budgets:
    mapping: dict[str, str] = {}
    if args.config:
        with open(args.config) as fh:
            for line in fh:
                line = line.strip()
                if not line or line.startswith("#"):
                    continue
                key, _, value = line.partition("=")
                mapping[key.strip()] = value.strip()
    budgets = Budgets.from_mapping(mapping)
    overrides = {name: getattr(args, name) for name in _CAP_FLAGS
                 if getattr(args, name) is not None}
    if overrides:
        budgets = Budgets(**{**budgets.__dict__, **overrides})
    return budgets


def _formulas(args) -> list[fm.Formula]:
    if getattr(args, "formula", None):
        return [fm.parse(args.formula)]
    if getattr(args, "infile", None):
        out = []
        with open(args.infile) as fh:
            for line in fh:
                line = line.strip()
                if line and not line.startswith("#"):
                    out.append(fm.parse(line))
        if not out:
            raise ValueError("input file holds no formulas")
        return out
    raise ValueError("give --formula or --in")


def _write(content: str, out: str | None, index: int | None) -> None:
    if out is None:
        sys.stdout.write(content)
        return
    path = out if index is None else f"{out}.{index}"
    with open(path, "w") as fh:
        fh.write(content)


def _cmd_translate(args) -> int:
    budgets = _budgets(args)
    formulas = _formulas(args)
    if args.pipeline == "mso":
        cfg = EncodingConfig(args.norm, args.constraint, args.vars)
        pipeline = f"mso-{cfg.name}"
    elif args.pipeline == "cmso":
        pipeline = f"cmso-{args.flavor}"
    else:
        pipeline = args.pipeline
    multi = len(formulas) > 1
    for i, phi in enumerate(formulas):
        if pipeline == "fol-emit":
            content = mona.emit_fol(phi, args.norm)
        else:
            outcome = run_pipeline(phi, pipeline, budgets)
            if outcome.status == "budget":
                print(f"budget exhausted: {outcome.error}", file=sys.stderr)
                return 3
            content = (to_dot(outcome.dfa) if args.format == "dot"
                       else to_explicit_text(outcome.dfa))
        _write(content, args.out, i if multi else None)
    return 0


def _cmd_check(args) -> int:
    budgets = _budgets(args)
    formulas = _formulas(args) if (args.formula or args.infile) else default_corpus()
    reports = check_corpus(formulas, args.trace_len, budgets,
                           inject_fault=args.inject_fault, workers=args.workers)
    bad = 0
    for rep in reports:
        flags = []
        if rep.unsat:
            flags.append("unsat")
        if rep.valid:
            flags.append("valid")
        budgeted = [o.pipeline for o in rep.outcomes.values() if o.status != "ok"]
        note = f" [{' '.join(flags)}]" if flags else ""
        if rep.consistent:
            extra = f" (skipped: {', '.join(budgeted)})" if budgeted else ""
            print(f"OK   {rep.formula}{note}{extra}")
        else:
            bad += 1
            print(f"FAIL {rep.formula}{note}: {'; '.join(rep.problems[:4])}")
    print(f"{len(reports) - bad}/{len(reports)} formulas consistent")
    return 1 if bad else 0


def _cmd_bench(args) -> int:
    budgets = _budgets(args)
    if args.pattern:
        formulas = gen_patterns(args.pattern, args.n)
    else:
        formulas = _formulas(args)
    rows = bench_rows(formulas, budgets, args.timeout_ms, args.workers)
    csv_text = rows_to_csv(rows)
    _write(csv_text, args.out, None)
    return 0


def _cmd_emit_mona(args) -> int:
    formulas = _formulas(args)
    multi = len(formulas) > 1
    for i, phi in enumerate(formulas):
        if args.encoding == "fol":
            content = mona.emit_fol(phi, args.norm)
        elif args.encoding == "fol-past":
            content = mona.emit_fol_past(phi)
        elif args.encoding == "mso":
            content = mona.emit_mso(phi, EncodingConfig(args.norm, args.constraint, args.vars))
        else:
            raise ValueError(f"unsupported encoding {args.encoding!r}")
        _write(content, args.out, i if multi else None)
    return 0


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ltlfdfa")
    sub = p.add_subparsers(dest="command", required=True)

    t = sub.add_parser("translate", help="formula to minimized DFA or MONA source")
    t.add_argument("--formula")
    t.add_argument("--in", dest="infile")
    t.add_argument("--pipeline", required=True,
                   choices=("reverse", "mso", "cmso", "fol-emit"))
    t.add_argument("--norm", choices=("bnf", "nnf"), default="bnf")
    t.add_argument("--constraint", choices=("fussy", "sloppy"), default="fussy")
    t.add_argument("--vars", choices=("full", "lean"), default="full")
    t.add_argument("--flavor", choices=("fussy", "sloppy"), default="fussy")
    t.add_argument("--out")
    t.add_argument("--format", choices=("dot", "explicit"), default="explicit")
    _add_budget_flags(t)
    t.set_defaults(fn=_cmd_translate)

    c = sub.add_parser("check", help="cross-validate all pipelines on a corpus")
    c.add_argument("--formula")
    c.add_argument("--in", dest="infile")
    c.add_argument("--trace-len", type=int, default=4)
    c.add_argument("--inject-fault", action="store_true",
                   help="test-only: swap fussy for sloppy on bnf input")
    c.add_argument("--workers", type=int, default=1)
    _add_budget_flags(c)
    c.set_defaults(fn=_cmd_check)

    b = sub.add_parser("bench", help="time all pipelines, emit CSV")
    b.add_argument("--pattern", choices=("conj-F", "resp-chain", "u-nest"))
    b.add_argument("--n", type=int, default=3)
    b.add_argument("--formula")
    b.add_argument("--in", dest="infile")
    b.add_argument("--timeout-ms", type=float, default=None)
    b.add_argument("--workers", type=int, default=1)
    b.add_argument("--out")
    _add_budget_flags(b)
    b.set_defaults(fn=_cmd_bench)

    m = sub.add_parser("emit-mona", help="write a MONA source file")
    m.add_argument("--formula")
    m.add_argument("--in", dest="infile")
    m.add_argument("--encoding", required=True, choices=("fol", "fol-past", "mso"))
    m.add_argument("--norm", choices=("bnf", "nnf"), default="bnf")
    m.add_argument("--constraint", choices=("fussy", "sloppy"), default="fussy")
    m.add_argument("--vars", choices=("full", "lean"), default="full")
    m.add_argument("--out")
    m.set_defaults(fn=_cmd_emit_mona)
    return p


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    try:
        return args.fn(args)
    except (ParseError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except BudgetExceededError as exc:
        print(f"budget exhausted: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
