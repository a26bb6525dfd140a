"""Deterministic formula grids shared by the test modules.

The future grid holds every formula of operator depth <= 1 over two atoms
and a seeded random sample of depth 2 and 3 formulas, capped and deduped;
the past grid is sampled the same way over the past operators.
"""

import random

from ltlfdfa import formulas as fm

LEAVES = (fm.TRUE, fm.FALSE, fm.Atom("a"), fm.Atom("b"))
UNARY = (fm.Not, fm.Next, fm.WeakNext)
BINARY = (fm.And, fm.Or, fm.Implies, fm.Until, fm.Release)
PAST_UNARY = (fm.Not, fm.Yesterday)
PAST_BINARY = (fm.And, fm.Or, fm.Since)


def _sample(rng, depth, unary, binary):
    if depth == 0:
        return rng.choice(LEAVES)
    if rng.random() < 0.35:
        return rng.choice(unary)(_sample(rng, depth - 1, unary, binary))
    op = rng.choice(binary)
    if rng.random() < 0.5:
        left = _sample(rng, depth - 1, unary, binary)
        right = _sample(rng, rng.randint(0, depth - 1), unary, binary)
    else:
        left = _sample(rng, rng.randint(0, depth - 1), unary, binary)
        right = _sample(rng, depth - 1, unary, binary)
    return op(left, right)


def future_grid(target: int = 500, seed: int = 2024) -> list[fm.Formula]:
    rng = random.Random(seed)
    out: list[fm.Formula] = []
    seen: set[fm.Formula] = set()

    def add(phi):
        if phi not in seen:
            seen.add(phi)
            out.append(phi)

    for leaf in LEAVES:
        add(leaf)
    for op in UNARY:
        for leaf in LEAVES:
            add(op(leaf))
    for op in BINARY:
        for left in LEAVES:
            for right in LEAVES:
                add(op(left, right))
    while len(out) < target:
        add(_sample(rng, rng.choice((2, 3)), UNARY, BINARY))
    return out[:target]


def past_grid(target: int = 200, seed: int = 7) -> list[fm.Formula]:
    rng = random.Random(seed)
    out: list[fm.Formula] = []
    seen: set[fm.Formula] = set()
    for depth in (0, 1):
        pool = LEAVES if depth == 0 else [
            op(l) for op in PAST_UNARY for l in LEAVES
        ] + [op(l, r) for op in PAST_BINARY for l in LEAVES for r in LEAVES]
        for phi in pool:
            if phi not in seen:
                seen.add(phi)
                out.append(phi)
    while len(out) < target:
        phi = _sample(rng, rng.choice((2, 3)), PAST_UNARY, PAST_BINARY)
        if phi not in seen:
            seen.add(phi)
            out.append(phi)
    return out[:target]
