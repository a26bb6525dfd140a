"""Explicit NFA/DFA algebra: determinization, minimization, reversal, comparison.

Letters are bit vectors over the sorted atom alphabet (bit i = i-th atom),
enumerated in increasing integer order; transition tables are letter-indexed
lists, which fixes the canonical breadth-first numbering.

Every language in this toolkit excludes the empty trace, so automata are
compared and minimized over nonempty words only: `minimize` returns the
smallest DFA agreeing with the input on all words of length >= 1, treating
empty-word membership as a free choice (ties resolve to rejecting it).
`accepts` rejects the empty trace outright.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .errors import BudgetExceededError, DeadlineExceededError

DEFAULT_STATE_CAP = 1_000_000


@dataclass(frozen=True)
class ExplicitDfa:
    atoms: tuple[str, ...]
    initial: int
    delta: tuple[tuple[int, ...], ...]  # delta[state][letter]
    accepting: frozenset[int]

    @property
    def n_states(self) -> int:
        return len(self.delta)

    @property
    def n_letters(self) -> int:
        return 1 << len(self.atoms)

    @property
    def n_transitions(self) -> int:
        return self.n_states * self.n_letters

    def letter_of(self, letter_set: frozenset[str]) -> int:
        extra = letter_set - set(self.atoms)
        if extra:
            raise ValueError(f"letter uses atoms outside the alphabet: {sorted(extra)}")
        return sum(1 << i for i, a in enumerate(self.atoms) if a in letter_set)

    def step(self, state: int, letter_set: frozenset[str]) -> int:
        return self.delta[state][self.letter_of(letter_set)]


@dataclass(frozen=True)
class Nfa:
    atoms: tuple[str, ...]
    initials: frozenset[int]
    delta: tuple[tuple[frozenset[int], ...], ...]
    accepting: frozenset[int]

    @property
    def n_states(self) -> int:
        return len(self.delta)

    @property
    def n_letters(self) -> int:
        return 1 << len(self.atoms)


def accepts(d: ExplicitDfa, rho) -> bool:
    """Membership of a trace; the empty trace is rejected by convention."""
    if len(rho) == 0:
        return False
    state = d.initial
    for letter in rho:
        state = d.step(state, frozenset(letter))
    return state in d.accepting


def determinize(n: Nfa, state_cap: int = DEFAULT_STATE_CAP, deadline=None) -> ExplicitDfa:
    """Subset construction over reachable subsets, canonically numbered."""
    start = frozenset(n.initials)
    index = {start: 0}
    order = [start]
    delta: list[tuple[int, ...]] = []
    queue = deque([start])
    while queue:
        if deadline is not None:
            deadline.check()
        subset = queue.popleft()
        row = []
        for letter in range(n.n_letters):
            nxt = frozenset().union(*(n.delta[s][letter] for s in subset)) if subset else frozenset()
            if nxt not in index:
                if len(index) >= state_cap:
                    raise BudgetExceededError(f"subset construction exceeded {state_cap} states")
                index[nxt] = len(index)
                order.append(nxt)
                queue.append(nxt)
            row.append(index[nxt])
        delta.append(tuple(row))
    accepting = frozenset(i for i, sub in enumerate(order) if sub & n.accepting)
    return ExplicitDfa(n.atoms, 0, tuple(delta), accepting)


def reverse(d: ExplicitDfa) -> Nfa:
    """Transitions inverted, accepting states become initial, s0 becomes accepting."""
    delta: list[list[set[int]]] = [
        [set() for _ in range(d.n_letters)] for _ in range(d.n_states)
    ]
    for src in range(d.n_states):
        for letter, dst in enumerate(d.delta[src]):
            delta[dst][letter].add(src)
    return Nfa(
        d.atoms,
        frozenset(d.accepting),
        tuple(tuple(frozenset(cell) for cell in row) for row in delta),
        frozenset((d.initial,)),
    )


def _reachable(d: ExplicitDfa) -> ExplicitDfa:
    seen = {d.initial: 0}
    order = [d.initial]
    queue = deque([d.initial])
    while queue:
        s = queue.popleft()
        for t in d.delta[s]:
            if t not in seen:
                seen[t] = len(seen)
                order.append(t)
                queue.append(t)
    delta = tuple(tuple(seen[t] for t in d.delta[s]) for s in order)
    accepting = frozenset(seen[s] for s in d.accepting if s in seen)
    return ExplicitDfa(d.atoms, 0, delta, accepting)


def canonicalize(d: ExplicitDfa) -> ExplicitDfa:
    """Renumber states breadth-first from the initial state, letters ascending."""
    return _reachable(d)


def _hopcroft(d: ExplicitDfa, deadline=None) -> ExplicitDfa:
    """Classic partition refinement; input must be total and reachable."""
    n = d.n_states
    letters = range(d.n_letters)
    acc = set(d.accepting)
    rej = set(range(n)) - acc
    preimage = [[[] for _ in range(n)] for _ in letters]
    for s in range(n):
        for a in letters:
            preimage[a][d.delta[s][a]].append(s)

    blocks: list[set[int]] = [b for b in (acc, rej) if b]
    block_of = {}
    for i, b in enumerate(blocks):
        for s in b:
            block_of[s] = i
    worklist = {(i, a) for i in range(len(blocks)) for a in letters}
    while worklist:
        if deadline is not None:
            deadline.check()
        i, a = worklist.pop()
        splitter = blocks[i]
        moved: dict[int, list[int]] = {}
        pre = set()
        for t in splitter:
            pre.update(preimage[a][t])
        for s in pre:
            moved.setdefault(block_of[s], []).append(s)
        for j, hit in moved.items():
            if len(hit) == len(blocks[j]):
                continue
            new = set(hit)
            blocks[j] -= new
            k = len(blocks)
            blocks.append(new)
            for s in new:
                block_of[s] = k
            for b in letters:
                if (j, b) in worklist:
                    worklist.add((k, b))
                elif len(new) <= len(blocks[j]):
                    worklist.add((k, b))
                else:
                    worklist.add((j, b))
    delta = tuple(
        tuple(block_of[d.delta[next(iter(blocks[i]))][a]] for a in letters)
        for i in range(len(blocks))
    )
    merged = ExplicitDfa(
        d.atoms,
        block_of[d.initial],
        delta,
        frozenset(block_of[s] for s in d.accepting),
    )
    return canonicalize(merged)


def _with_fresh_initial(d: ExplicitDfa, initial_accepting: bool) -> ExplicitDfa:
    """Clone the initial state so its acceptance flag only governs the empty word."""
    fresh = d.n_states
    delta = tuple(d.delta) + (tuple(d.delta[d.initial]),)
    accepting = set(d.accepting)
    accepting.discard(fresh)
    if initial_accepting:
        accepting.add(fresh)
    return ExplicitDfa(d.atoms, fresh, delta, frozenset(accepting))


def minimize(d: ExplicitDfa, deadline=None) -> ExplicitDfa:
    """Unique smallest DFA with the same nonempty-word language.

    Both empty-word completions are minimized (Hopcroft) and the smaller one
    is kept; on a tie the empty word stays rejected.  The result is
    canonically numbered, so structural equality is language equality.
    """
    d = _reachable(d)
    strict = _hopcroft(_with_fresh_initial(d, False), deadline)
    loose = _hopcroft(_with_fresh_initial(d, True), deadline)
    return loose if loose.n_states < strict.n_states else strict


def isomorphic(a: ExplicitDfa, b: ExplicitDfa) -> bool:
    """Equality after canonical minimization."""
    _check_alphabets(a, b)
    return minimize(a) == minimize(b)


def equivalent(a: ExplicitDfa, b: ExplicitDfa) -> bool:
    """Language equality over nonempty words, by product reachability."""
    _check_alphabets(a, b)
    seen = {(a.initial, b.initial)}
    queue = deque(seen)
    while queue:
        sa, sb = queue.popleft()
        for letter in range(a.n_letters):
            ta, tb = a.delta[sa][letter], b.delta[sb][letter]
            if (ta in a.accepting) != (tb in b.accepting):
                return False
            if (ta, tb) not in seen:
                seen.add((ta, tb))
                queue.append((ta, tb))
    return True


def is_empty(d: ExplicitDfa) -> bool:
    """No nonempty word is accepted."""
    seen = set()
    queue = deque(d.delta[d.initial])
    while queue:
        s = queue.popleft()
        if s in seen:
            continue
        seen.add(s)
        if s in d.accepting:
            return False
        queue.extend(d.delta[s])
    return True


def is_universal(d: ExplicitDfa) -> bool:
    """Every nonempty word is accepted."""
    seen = set()
    queue = deque(d.delta[d.initial])
    while queue:
        s = queue.popleft()
        if s in seen:
            continue
        seen.add(s)
        if s not in d.accepting:
            return False
        queue.extend(d.delta[s])
    return True


def _check_alphabets(a: ExplicitDfa, b: ExplicitDfa) -> None:
    if a.atoms != b.atoms:
        raise ValueError(f"alphabet mismatch: {a.atoms} vs {b.atoms}")


def brzozowski_minimize(d: ExplicitDfa) -> ExplicitDfa:
    """Reverse-determinize twice; independent oracle for minimal automata.

    Exact over all words including the empty one, so callers comparing with
    `minimize` must apply it to both empty-word completions themselves.
    """
    half = determinize(reverse(_reachable(d)))
    return determinize(reverse(half))


def minimal_size_oracle(d: ExplicitDfa) -> int:
    """Don't-care-empty-word minimal size, via the Brzozowski route only."""
    d = _reachable(d)
    strict = brzozowski_minimize(_with_fresh_initial(d, False))
    loose = brzozowski_minimize(_with_fresh_initial(d, True))
    return min(strict.n_states, loose.n_states)


# text formats --------------------------------------------------------------

def to_explicit_text(d: ExplicitDfa) -> str:
    """Line format: header `dfa |S| |P| s0`, `acc:` line, then sorted transitions."""
    lines = [f"dfa {d.n_states} {len(d.atoms)} {d.initial}"]
    lines.append("acc: " + " ".join(str(s) for s in sorted(d.accepting)))
    width = len(d.atoms)
    for src in range(d.n_states):
        for letter in range(d.n_letters):
            bits = format(letter, f"0{width}b")[::-1] if width else ""
            lines.append(f"{src} {bits} {d.delta[src][letter]}")
    return "\n".join(lines) + "\n"


def from_explicit_text(text: str) -> ExplicitDfa:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    head = lines[0].split()
    if head[0] != "dfa":
        raise ValueError("missing dfa header")
    n_states, n_atoms, initial = int(head[1]), int(head[2]), int(head[3])
    acc_parts = lines[1].split(":", 1)[1].split()
    accepting = frozenset(int(p) for p in acc_parts)
    atoms = tuple(f"p{i}" for i in range(n_atoms))
    delta = [[0] * (1 << n_atoms) for _ in range(n_states)]
    for ln in lines[2:]:
        src, bits, dst = ln.split()
        letter = sum(1 << i for i, c in enumerate(bits) if c == "1") if bits else 0
        delta[int(src)][letter] = int(dst)
    return ExplicitDfa(atoms, initial, tuple(tuple(r) for r in delta), accepting)


def to_dot(d: ExplicitDfa) -> str:
    lines = ["digraph dfa {", "  rankdir=LR;", '  hidden [shape=point, label=""];']
    for s in range(d.n_states):
        shape = "doublecircle" if s in d.accepting else "circle"
        lines.append(f"  {s} [shape={shape}];")
    lines.append(f"  hidden -> {d.initial};")
    width = len(d.atoms)
    grouped: dict[tuple[int, int], list[str]] = {}
    for src in range(d.n_states):
        for letter in range(d.n_letters):
            bits = format(letter, f"0{width}b")[::-1] if width else "-"
            grouped.setdefault((src, d.delta[src][letter]), []).append(bits)
    for (src, dst), labels in sorted(grouped.items()):
        lines.append(f'  {src} -> {dst} [label="{",".join(labels)}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
