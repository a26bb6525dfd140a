"""LTLf-to-DFA translation through first-order, second-order and BDD-derived
compact second-order encodings, cross-validated against trace semantics."""

from .automata import (ExplicitDfa, Nfa, accepts, determinize, equivalent,
                       is_empty, is_universal, isomorphic, minimize, reverse)
from .compact import RevSentence, build_rev, canonical_rev_witness
from .compiler import compile_sentence, compile_with_stats
from .fol import encode_fol, encode_fol_past, eval_fol
from .formulas import (Closure, Formula, alphabet, closure, parse,
                       reverse_to_past, to_bnf, to_nnf, to_text)
from .mso import (ALL_CONFIGS, EncodingConfig, MonadicSentence, encode_mso,
                  eval_sentence_bruteforce, eval_sentence_witness)
from .pipelines import (Budgets, check_corpus, default_corpus, gen_pattern,
                        gen_patterns, run_pipeline, translate)
from .symbolic import (SymbolicDfa, compose_acceptance, extract_edges,
                       pltlf_to_symbolic_dfa, symbolic_to_explicit)
from .traces import (Trace, bounded_language, eval_ltlf_at, eval_pltlf_at,
                     format_trace, parse_trace)

__all__ = [name for name in dir() if not name.startswith("_")]
