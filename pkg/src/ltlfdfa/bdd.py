"""Reduced ordered binary decision diagrams with hash-consing.

One store owns one fixed variable order (the construction site names all
variables up front).  Nodes are integers: 0 and 1 are the terminals, every
other id is a (level, low, high) triple kept unique in a table, so equal
functions have equal roots within a store.  Terminals live at the pseudo
level `n_vars`, below every real variable.
"""

from __future__ import annotations

from .errors import BudgetExceededError

DEFAULT_NODE_CAP = 1 << 20

ZERO = 0
ONE = 1


class BddStore:
    def __init__(self, var_names, node_cap: int = DEFAULT_NODE_CAP):
        names = tuple(var_names)
        if len(set(names)) != len(names):
            raise ValueError("duplicate variable names")
        self.var_names = names
        self.level_of = {name: i for i, name in enumerate(names)}
        self.node_cap = node_cap
        terminal = len(names)
        self._level = [terminal, terminal]
        self._lo = [0, 1]
        self._hi = [0, 1]
        self._unique: dict[tuple[int, int, int], int] = {}
        self._ite_memo: dict[tuple[int, int, int], int] = {}
        self._op_memo: dict[tuple, int] = {}

    # construction ----------------------------------------------------------

    @property
    def n_vars(self) -> int:
        return len(self.var_names)

    def __len__(self) -> int:
        return len(self._level) - 2

    def mk(self, level: int, lo: int, hi: int) -> int:
        if lo == hi:
            return lo
        key = (level, lo, hi)
        found = self._unique.get(key)
        if found is not None:
            return found
        if not (0 <= level < self._level[lo] and level < self._level[hi]):
            raise ValueError(f"ordering violated at level {level}")
        node = len(self._level)
        if node - 2 >= self.node_cap:
            raise BudgetExceededError(f"store exceeded {self.node_cap} nodes")
        self._level.append(level)
        self._lo.append(lo)
        self._hi.append(hi)
        self._unique[key] = node
        return node

    def var(self, name: str) -> int:
        return self.mk(self.level_of[name], ZERO, ONE)

    def nvar(self, name: str) -> int:
        return self.mk(self.level_of[name], ONE, ZERO)

    def level(self, node: int) -> int:
        return self._level[node]

    def low(self, node: int) -> int:
        return self._lo[node]

    def high(self, node: int) -> int:
        return self._hi[node]

    def is_terminal(self, node: int) -> bool:
        return node < 2

    # algebra ----------------------------------------------------------------

    def ite(self, f: int, g: int, h: int) -> int:
        if f == ONE:
            return g
        if f == ZERO:
            return h
        if g == h:
            return g
        if g == ONE and h == ZERO:
            return f
        key = (f, g, h)
        found = self._ite_memo.get(key)
        if found is not None:
            return found
        top = min(self._level[f], self._level[g], self._level[h])
        f0, f1 = self._cof(f, top)
        g0, g1 = self._cof(g, top)
        h0, h1 = self._cof(h, top)
        out = self.mk(top, self.ite(f0, g0, h0), self.ite(f1, g1, h1))
        self._ite_memo[key] = out
        return out

    def _cof(self, node: int, level: int) -> tuple[int, int]:
        if self._level[node] == level:
            return self._lo[node], self._hi[node]
        return node, node

    def apply(self, op: str, a: int, b: int | None = None) -> int:
        if op == "not":
            return self.ite(a, ZERO, ONE)
        if op == "and":
            return self.ite(a, b, ZERO)
        if op == "or":
            return self.ite(a, ONE, b)
        if op == "xor":
            return self.ite(a, self.ite(b, ZERO, ONE), b)
        if op == "ite":
            raise ValueError("ite takes three arguments; call ite() directly")
        raise ValueError(f"unknown operation {op!r}")

    def not_(self, a: int) -> int:
        return self.ite(a, ZERO, ONE)

    def and_(self, a: int, b: int) -> int:
        return self.ite(a, b, ZERO)

    def or_(self, a: int, b: int) -> int:
        return self.ite(a, ONE, b)

    def xor(self, a: int, b: int) -> int:
        return self.ite(a, self.not_(b), b)

    def implies(self, a: int, b: int) -> int:
        return self.ite(a, b, ONE)

    def iff(self, a: int, b: int) -> int:
        return self.ite(a, b, self.not_(b))

    def conj(self, roots) -> int:
        out = ONE
        for r in roots:
            out = self.and_(out, r)
        return out

    def disj(self, roots) -> int:
        out = ZERO
        for r in roots:
            out = self.or_(out, r)
        return out

    def restrict(self, node: int, name: str, value: bool) -> int:
        target = self.level_of[name]
        memo = self._op_memo
        key = ("restrict", node, target, value)
        found = memo.get(key)
        if found is not None:
            return found
        if self._level[node] > target:
            out = node
        elif self._level[node] == target:
            out = self._hi[node] if value else self._lo[node]
        else:
            out = self.mk(
                self._level[node],
                self.restrict(self._lo[node], name, value),
                self.restrict(self._hi[node], name, value),
            )
        memo[key] = out
        return out

    def compose(self, node: int, name: str, replacement: int) -> int:
        """node[name := replacement]."""
        return self._compose(node, self.level_of[name], replacement)

    def _compose(self, node: int, target: int, replacement: int) -> int:
        if self._level[node] > target:
            return node
        key = ("compose", node, target, replacement)
        found = self._op_memo.get(key)
        if found is not None:
            return found
        lvl = self._level[node]
        if lvl == target:
            out = self.ite(replacement, self._hi[node], self._lo[node])
        else:
            lo = self._compose(self._lo[node], target, replacement)
            hi = self._compose(self._hi[node], target, replacement)
            out = self.ite(self.mk(lvl, ZERO, ONE), hi, lo)
        self._op_memo[key] = out
        return out

    def veccompose(self, node: int, mapping: dict[str, int]) -> int:
        """Simultaneous substitution of variables by functions."""
        levels = {self.level_of[name]: root for name, root in mapping.items()}
        memo: dict[int, int] = {}

        def walk(f: int) -> int:
            if f < 2:
                return f
            found = memo.get(f)
            if found is not None:
                return found
            lvl = self._level[f]
            branch = levels.get(lvl, self.mk(lvl, ZERO, ONE))
            out = self.ite(branch, walk(self._hi[f]), walk(self._lo[f]))
            memo[f] = out
            return out

        return walk(node)

    def exists(self, node: int, names) -> int:
        levels = frozenset(self.level_of[n] for n in names)
        if not levels:
            return node
        horizon = max(levels)
        return self._exists(node, levels, horizon)

    def _exists(self, node: int, levels: frozenset[int], horizon: int) -> int:
        if node < 2 or self._level[node] > horizon:
            return node
        key = ("exists", node, levels)
        found = self._op_memo.get(key)
        if found is not None:
            return found
        lo = self._exists(self._lo[node], levels, horizon)
        hi = self._exists(self._hi[node], levels, horizon)
        lvl = self._level[node]
        out = self.or_(lo, hi) if lvl in levels else self.mk(lvl, lo, hi)
        self._op_memo[key] = out
        return out

    def rename(self, node: int, mapping: dict[str, str]) -> int:
        """Relabel variables; the mapping must preserve the level order."""
        levels = {self.level_of[a]: self.level_of[b] for a, b in mapping.items()}
        memo: dict[int, int] = {}

        def walk(f: int) -> int:
            if f < 2:
                return f
            found = memo.get(f)
            if found is not None:
                return found
            lvl = levels.get(self._level[f], self._level[f])
            out = self.mk(lvl, walk(self._lo[f]), walk(self._hi[f]))
            memo[f] = out
            return out

        return walk(node)

    # inspection -------------------------------------------------------------

    def evaluate(self, node: int, values: dict[str, bool]) -> bool:
        f = node
        while f >= 2:
            f = self._hi[f] if values.get(self.var_names[self._level[f]], False) else self._lo[f]
        return f == ONE

    def evaluate_levels(self, node: int, bits: list[bool]) -> bool:
        f = node
        while f >= 2:
            f = self._hi[f] if bits[self._level[f]] else self._lo[f]
        return f == ONE

    def reachable(self, node: int) -> list[int]:
        """Nonterminal nodes reachable from the root, preorder, low before high."""
        out: list[int] = []
        seen: set[int] = set()
        stack = [node]
        while stack:
            f = stack.pop()
            if f < 2 or f in seen:
                continue
            seen.add(f)
            out.append(f)
            stack.append(self._hi[f])
            stack.append(self._lo[f])
        return out

    def validate(self) -> None:
        """Full ordered/reduced/canonical invariant sweep over the store."""
        seen: set[tuple[int, int, int]] = set()
        for node in range(2, len(self._level)):
            lvl, lo, hi = self._level[node], self._lo[node], self._hi[node]
            if lo == hi:
                raise AssertionError(f"node {node} is redundant")
            if not (lvl < self._level[lo] and lvl < self._level[hi]):
                raise AssertionError(f"node {node} breaks the order")
            key = (lvl, lo, hi)
            if key in seen:
                raise AssertionError(f"duplicate triple {key}")
            seen.add(key)
            if self._unique.get(key) != node:
                raise AssertionError(f"unique table out of sync at {node}")

    def to_dot(self, node: int) -> str:
        lines = ["digraph bdd {", "  0 [shape=box]; 1 [shape=box];"]
        for f in self.reachable(node):
            lines.append(f'  {f} [label="{self._level[f]}"];')
            lines.append(f"  {f} -> {self._lo[f]} [style=dashed];")
            lines.append(f"  {f} -> {self._hi[f]};")
        lines.append("}")
        return "\n".join(lines) + "\n"
