import random

import pytest

from qreduce.pbw import make_algebra
from qreduce.projector import (ProjectorSpec, apply_projector, projector_element, projector_factor_terms,
                               verify_projector_properties)
from qreduce.qfield import AffineExpr, CartanRat, VanishingDenominator, qbracket_sym
from qreduce.verma import VermaVector, act, generic_weight, highest_vector


def test_gl2_examples():
    ctx = make_algebra(2)
    spec = ProjectorSpec(ctx, 2)
    lam = (17, -3)
    v = highest_vector(ctx, lam)
    assert apply_projector(spec, v) == v
    assert apply_projector(spec, VermaVector.monomial(ctx, lam, (1,))).is_zero()


def test_gl2_inside_gl3():
    ctx = make_algebra(3)
    spec = ProjectorSpec(ctx, 2)
    lam = (20, 3, -15)
    w = VermaVector.monomial(ctx, lam, (0, 1, 0))  # e31 v
    pw = apply_projector(spec, w)
    assert pw.coefficient((0, 1, 0)).is_one()
    assert set(pw.terms) == {(0, 1, 0), (1, 0, 1)}
    assert act(ctx, ctx.e(1, 2), pw).is_zero()


def test_factor_terms():
    ctx = make_algebra(2)
    spec = ProjectorSpec(ctx, 2)
    assert projector_factor_terms(spec, 1, 2, 0) == ctx.one()
    den = qbracket_sym(AffineExpr((1, -1), 2))
    expected = ctx.one() - ctx.scalar(CartanRat.from_int(1, 2) / den) * (ctx.e(2, 1) * ctx.e(1, 2))
    assert projector_factor_terms(spec, 1, 2, 1) == expected


def test_factor_prefactor_for_long_root():
    ctx = make_algebra(3)
    spec = ProjectorSpec(ctx, 3)
    term = projector_factor_terms(spec, 1, 3, 1) - ctx.one()
    den = qbracket_sym(AffineExpr((1, 0, -1), 3))
    expected = -(ctx.scalar(CartanRat.q_power(-1, 3) / den) * (ctx.e(3, 1) * ctx.e(1, 3)))
    assert term == expected


def test_factor_order():
    ctx = make_algebra(3)
    assert ProjectorSpec(ctx, 3).factors == ((1, 2), (1, 3), (2, 3))
    assert ProjectorSpec(ctx, 2, offset=1).factors == ((2, 3),)
    with pytest.raises(ValueError):
        ProjectorSpec(ctx, 3, offset=1)


def test_truncated_element_acts_like_operator():
    ctx = make_algebra(3)
    spec = ProjectorSpec(ctx, 3)
    lam = generic_weight(3, random.Random(4))
    p = projector_element(spec, 4)
    for mono in [(0, 0, 0), (1, 0, 0), (0, 1, 0), (1, 0, 1), (2, 0, 1)]:
        w = VermaVector.monomial(ctx, lam, mono)
        assert act(ctx, p, w) == apply_projector(spec, w)


def test_properties_gl2():
    ctx = make_algebra(2)
    spec = ProjectorSpec(ctx, 2)
    rep = verify_projector_properties(spec, [(17, -3), (-14, 9), (30, 2)], 4)
    assert rep.passed, rep.failures[:3]
    assert rep.checks > 50


def test_dominant_weight_hits_its_wall():
    ctx = make_algebra(2)
    spec = ProjectorSpec(ctx, 2)
    low = verify_projector_properties(spec, [(5, 0)], 2)
    assert low.passed
    high = verify_projector_properties(spec, [(5, 0)], 4)
    assert not high.failures
    assert {tuple(e["vector"]) for e in high.errors} == {(3,), (4,)}


def test_properties_gl3():
    ctx = make_algebra(3)
    spec = ProjectorSpec(ctx, 3)
    rng = random.Random(8)
    rep = verify_projector_properties(spec, [generic_weight(3, rng) for _ in range(3)], 3)
    assert rep.passed, (rep.failures[:3], rep.errors[:3])


def test_degenerate_weight_reported():
    ctx = make_algebra(2)
    spec = ProjectorSpec(ctx, 2)
    # on e21^2 v at (2,0) the first factor needs [phi_12 + 1] at weight (0, 2), which is [0]
    rep = verify_projector_properties(spec, [(2, 0)], 2)
    assert rep.errors and rep.errors[0]["check"] == "VanishingDenominator"
    assert not rep.passed
    with pytest.raises(VanishingDenominator):
        apply_projector(spec, VermaVector.monomial(ctx, (2, 0), (2,)))


def test_corrupted_projector_fails():
    ctx = make_algebra(2)
    spec = ProjectorSpec(ctx, 2)
    lam = (9, 1)
    w = VermaVector.monomial(ctx, lam, (1,))
    # dropping the correction term leaves a vector that is not highest
    assert not act(ctx, ctx.e(1, 2), w).is_zero()
    assert act(ctx, ctx.e(1, 2), apply_projector(spec, w)).is_zero()
