import random
from itertools import product

import pytest

from ltlfdfa.bdd import ONE, ZERO, BddStore
from ltlfdfa.errors import BudgetExceededError


def fresh(n=4):
    return BddStore([f"v{i}" for i in range(n)])


def test_terminals_and_vars():
    s = fresh()
    v = s.var("v0")
    assert s.low(v) == ZERO and s.high(v) == ONE
    assert s.var("v0") == v  # hash-consed
    assert s.nvar("v0") == s.not_(v)


def test_contradiction_and_tautology():
    s = fresh()
    v = s.var("v1")
    assert s.and_(v, s.not_(v)) == ZERO
    assert s.or_(v, s.not_(v)) == ONE
    assert s.ite(v, ONE, ZERO) == v


def test_reduction():
    s = fresh()
    v = s.var("v0")
    assert s.mk(1, v, v) == v  # no redundant node
    with pytest.raises(ValueError):
        s.mk(3, s.var("v1"), ONE)  # would break the order


def test_apply_named_ops():
    s = fresh()
    a, b = s.var("v0"), s.var("v1")
    assert s.apply("and", a, b) == s.and_(a, b)
    assert s.apply("or", a, b) == s.or_(a, b)
    assert s.apply("xor", a, a) == ZERO
    assert s.apply("not", a) == s.not_(a)
    with pytest.raises(ValueError):
        s.apply("nand", a, b)


def test_restrict():
    s = fresh()
    f = s.and_(s.var("v0"), s.or_(s.var("v1"), s.var("v2")))
    assert s.restrict(f, "v0", False) == ZERO
    assert s.restrict(f, "v0", True) == s.or_(s.var("v1"), s.var("v2"))


def test_compose_identity():
    s = fresh()
    assert s.compose(s.var("v0"), "v0", s.var("v2")) == s.var("v2")
    f = s.xor(s.var("v0"), s.var("v1"))
    g = s.and_(s.var("v2"), s.var("v3"))
    composed = s.compose(f, "v1", g)
    for bits in product((False, True), repeat=4):
        env = dict(zip(s.var_names, bits))
        assert s.evaluate(composed, env) == (bits[0] != (bits[2] and bits[3]))


def test_veccompose_is_simultaneous():
    s = fresh()
    # swap v0 and v1 simultaneously; sequential compose would collapse
    f = s.and_(s.var("v0"), s.not_(s.var("v1")))
    swapped = s.veccompose(f, {"v0": s.var("v1"), "v1": s.var("v0")})
    for bits in product((False, True), repeat=2):
        env = {"v0": bits[0], "v1": bits[1], "v2": False, "v3": False}
        assert s.evaluate(swapped, env) == (bits[1] and not bits[0])


def test_exists_and_rename():
    s = BddStore(["u0", "p0", "u1", "p1"])
    f = s.and_(s.var("u0"), s.var("p1"))
    assert s.exists(f, ["u0"]) == s.var("p1")
    assert s.exists(f, []) == f
    g = s.rename(s.var("p1"), {"p1": "u1"})
    assert g == s.var("u1")


def test_evaluate_levels():
    s = fresh(2)
    f = s.or_(s.var("v0"), s.var("v1"))
    assert s.evaluate_levels(f, [False, True])
    assert not s.evaluate_levels(f, [False, False])


def test_reachable_order_is_preorder_low_first():
    s = fresh(3)
    f = s.ite(s.var("v0"), s.var("v2"), s.var("v1"))
    nodes = s.reachable(f)
    assert nodes[0] == f
    assert s.level(nodes[1]) == 1  # low child visited before high


def test_node_cap():
    s = BddStore([f"v{i}" for i in range(8)], node_cap=4)
    with pytest.raises(BudgetExceededError):
        f = ONE
        for i in range(8):
            f = s.xor(f, s.var(f"v{i}"))


def test_validate_clean_store():
    s = fresh()
    s.xor(s.var("v0"), s.and_(s.var("v1"), s.var("v3")))
    s.validate()


def _random_expr(store, rng, depth):
    if depth == 0:
        return rng.choice([ZERO, ONE] + [store.var(v) for v in store.var_names])
    op = rng.choice(("and", "or", "xor", "not", "ite"))
    if op == "not":
        return store.not_(_random_expr(store, rng, depth - 1))
    if op == "ite":
        return store.ite(_random_expr(store, rng, depth - 1),
                         _random_expr(store, rng, depth - 1),
                         _random_expr(store, rng, depth - 1))
    return store.apply(op, _random_expr(store, rng, depth - 1),
                       _random_expr(store, rng, depth - 1))


def test_canonicity_randomized():
    # equal functions built along different apply routes share one root
    rng = random.Random(11)
    s = fresh(4)
    for _ in range(500):
        f = _random_expr(s, rng, 3)
        g = _random_expr(s, rng, 3)
        assert s.and_(f, g) == s.not_(s.or_(s.not_(f), s.not_(g)))
        assert s.xor(f, g) == s.or_(s.and_(f, s.not_(g)), s.and_(s.not_(f), g))
        assert s.ite(f, g, g) == g
    s.validate()


def test_semantics_exhaustive():
    rng = random.Random(5)
    s = fresh(3)
    for _ in range(50):
        f = _random_expr(s, rng, 3)
        g = _random_expr(s, rng, 3)
        h = s.ite(f, g, ZERO)
        for bits in product((False, True), repeat=3):
            env = dict(zip(s.var_names, bits))
            assert s.evaluate(h, env) == (s.evaluate(f, env) and s.evaluate(g, env))


def test_dot_dump():
    s = fresh(2)
    dot = s.to_dot(s.and_(s.var("v0"), s.var("v1")))
    assert "style=dashed" in dot and 'label="0"' in dot
