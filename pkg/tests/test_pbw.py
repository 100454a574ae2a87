import random

import pytest
from hypothesis import given, settings, strategies as st

from qreduce.pbw import (AlgebraContext, DegreeCapError, InvalidRank, InvalidSplit, composite_root_vector,
                         involution, make_algebra, random_element, serre_elements, verify_algebra, weight)
from qreduce.qfield import AffineExpr, CartanRat, qbracket_sym

q = CartanRat.q_power


def test_root_order():
    assert make_algebra(2).roots == ((1, 2),)
    assert make_algebra(3).roots == ((1, 2), (1, 3), (2, 3))
    assert make_algebra(4).roots == ((1, 2), (1, 3), (2, 3), (1, 4), (2, 4), (3, 4))
    with pytest.raises(InvalidRank):
        make_algebra(1)


def test_composite_vectors_n3():
    ctx = make_algebra(3)
    e = ctx.e
    # q-commutator with the power q^{(beta, gamma)}; (e12 root, e23 root) = -1
    assert composite_root_vector(ctx, 1, 3) == e(1, 2) * e(2, 3) - ctx.scalar(q(1)) * (e(2, 3) * e(1, 2))
    assert composite_root_vector(ctx, 3, 1) == e(3, 2) * e(2, 1) - ctx.scalar(q(-1)) * (e(2, 1) * e(3, 2))
    assert composite_root_vector(ctx, 1, 3) == e(1, 3)


def test_k_independence_n4():
    ctx = make_algebra(4)
    assert composite_root_vector(ctx, 1, 4, 2) == composite_root_vector(ctx, 1, 4, 3)
    assert composite_root_vector(ctx, 4, 1, 2) == composite_root_vector(ctx, 4, 1, 3)
    with pytest.raises(IndexError):
        composite_root_vector(ctx, 1, 4, 4)


def test_multiplication_examples():
    ctx = make_algebra(3)
    e = ctx.e
    assert e(2, 3) * e(1, 2) == ctx.scalar(q(-1)) * (e(1, 2) * e(2, 3)) - ctx.scalar(q(-1)) * e(1, 3)
    cart = qbracket_sym(AffineExpr((1, -1, 0), 0))
    assert e(1, 2) * e(2, 1) == e(2, 1) * e(1, 2) + ctx.scalar(cart)
    assert ctx.k(1) * e(1, 2) == ctx.scalar(q(1)) * (e(1, 2) * ctx.k(1))


@pytest.mark.parametrize("N", [3, 4])
def test_relations_vanish(N):
    ctx = make_algebra(N)
    bad = [label for label, rel in serre_elements(ctx) if not rel.is_zero()]
    assert bad == []


def test_suite_catches_nothing_on_correct_engine():
    rep = verify_algebra(3, random.Random(0), triples=10)
    assert rep.passed and rep.checks > 20


@given(st.integers(0, 10_000))
@settings(max_examples=25, deadline=None)
def test_associativity(seed):
    ctx = make_algebra(3)
    rng = random.Random(seed)
    a, b, c = (random_element(ctx, rng, 3, 1) for _ in range(3))
    assert (a * b) * c == a * (b * c)


@given(st.integers(0, 10_000))
@settings(max_examples=25, deadline=None)
def test_weight_additive(seed):
    ctx = make_algebra(3)
    rng = random.Random(seed)
    a = ctx.word([rng.randrange(2 * ctx.M) for _ in range(2)])
    b = ctx.word([rng.randrange(2 * ctx.M) for _ in range(2)])
    prod = a * b
    if not prod.is_zero():
        assert weight(ctx, prod) == tuple(x + y for x, y in zip(weight(ctx, a), weight(ctx, b)))


def test_weight_examples():
    ctx = make_algebra(3)
    ctx2 = make_algebra(2)
    assert weight(ctx2, ctx2.e(1, 2)) == (1, -1)
    assert weight(ctx, ctx.e(2, 1) * ctx.e(1, 2)) == (0, 0, 0)
    assert weight(ctx, ctx.e(3, 1)) == (-1, 0, 1)


@pytest.mark.parametrize("kind,mode", [("compact", "real"), ("compact", "circular"),
                                       ("noncompact", "real"), ("noncompact", "circular")])
def test_involution_properties(kind, mode):
    ctx = make_algebra(3)
    rng = random.Random(5)
    for _ in range(8):
        a, b = random_element(ctx, rng, 2, 2), random_element(ctx, rng, 2, 2)
        star = lambda x: involution(ctx, x, kind, mode, 2)  # noqa: E731
        assert star(a * b) == star(b) * star(a)
        assert star(star(a)) == a


def test_involution_examples():
    ctx = make_algebra(3)
    assert involution(ctx, ctx.e(1, 3), "compact", "circular") == ctx.e(3, 1)
    for mode in ("real", "circular"):
        assert involution(ctx, ctx.e(2, 3), "noncompact", mode, 2) == -ctx.e(3, 2)
        assert involution(ctx, ctx.e(1, 2), "noncompact", mode, 2) == ctx.e(2, 1)
    with pytest.raises(InvalidSplit):
        involution(ctx, ctx.e(1, 2), "noncompact", "real", 3)


def test_circular_involution_conjugates_q():
    ctx = make_algebra(2)
    x = ctx.scalar(q(2)) * ctx.e(1, 2)
    assert involution(ctx, x, "compact", "circular") == ctx.e(2, 1) * ctx.scalar(q(-2))
    assert involution(ctx, x, "compact", "real") == ctx.e(2, 1) * ctx.scalar(q(2))


def test_degree_cap():
    ctx = AlgebraContext(2, degree_cap=4)
    x = ctx.e(2, 1) ** 3
    with pytest.raises(DegreeCapError):
        x * x
