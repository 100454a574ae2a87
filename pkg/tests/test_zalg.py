import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from qreduce.pbw import make_algebra
from qreduce.qfield import AffineExpr, CartanRat, qbracket_sym
from qreduce.verma import VermaVector, act_gen, generic_weight, highest_vector
from qreduce.zalg import (ALPHA_FAMILIES, ClassicalZTable, IndexOutOfRange, NotHighest, ZAlgebra,
                          ZCoefficientTable, inversion_residuals, verify_z_relations, z_apply,
                          z_normal_order, z_weight)


def br(coeffs, c=0):
    return qbracket_sym(AffineExpr(tuple(coeffs), c))


def test_basic_coefficients_n1():
    t = ZCoefficientTable(1)
    assert t.b_basic(1, 1).is_one() and t.b_basic(1, -1).is_one()
    assert t.B(1, 1).is_one()
    assert t.gamma(1) == br((1, -1))


def test_basic_gamma_last_index():
    t = ZCoefficientTable(2)
    # [phi_23 - 1] = [e_22 - e_33]
    assert t.gamma(2) == br((0, 1, -1))


def test_alpha_coefficients():
    t = ZCoefficientTable(1, 1)
    assert t.gamma_alpha(1) == -br((1, -1))
    with pytest.raises(IndexOutOfRange):
        ZCoefficientTable(2, 3)
    with pytest.raises(IndexOutOfRange):
        ZCoefficientTable(2, 1).B_alpha(1, 3)


def test_alpha_zero_is_basic_system():
    t = ZCoefficientTable(2, 0)
    for i in (1, 2):
        assert t.gamma_alpha(i) == t.gamma(i)
        for j in (1, 2):
            assert t.B_alpha(i, j) == t.B(i, j)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_power_at_one_matches_alpha(n):
    for alpha in range(n + 1):
        t = ZCoefficientTable(n, alpha)
        for i in range(1, n + 1):
            assert t.coeffs_power(i, 1) == t.coeffs_alpha(i)


def test_power_gamma_n1():
    t = ZCoefficientTable(1, 1)
    two = CartanRat.q_power(1, 2) + CartanRat.q_power(-1, 2)
    assert t.gamma_power(1, 2) == -two * br((1, -1), 1)


def test_rewriting_examples():
    alg = ZAlgebra(1, 1)
    assert alg.normalize((0, 1)) == alg.element((1,))
    expected = alg.element((1, -1)) - alg.element((), br((1, -1)))
    assert alg.normalize((-1, 1)) == expected
    alg2 = ZAlgebra(2, 0)
    t = alg2.table
    assert alg2.normalize((2, 1)) == alg2.element((1, 2), t.br(1, 2) / t.br(1, 2, 1))
    alg3 = ZAlgebra(2, 2)
    # with alpha = n both z_1 and z_2 are lowering and already ascend
    assert alg3.is_canonical((1, 2))


words = st.lists(st.sampled_from([1, 2, -1, -2]), min_size=0, max_size=4).map(tuple)


@given(st.integers(0, 2), words, words)
@settings(max_examples=60, deadline=None)
def test_normal_order_idempotent_and_multiplicative(alpha, u, w):
    alg = ZAlgebra(2, alpha)
    x = alg.normalize(u)
    assert alg.normalize(x) == x
    assert all(alg.is_canonical(word) for word in x.terms)
    y = alg.normalize(w)
    assert alg.multiply(x, y) == alg.normalize(u + w)


def test_weights_and_indices():
    assert z_weight(2, (1, -2)) == (1, -1, 0)
    alg = ZAlgebra(2)
    with pytest.raises(IndexOutOfRange):
        alg.element((3,))


def test_z_apply_n1_is_plain_action():
    ctx = make_algebra(2)
    lam = (7, 2)
    w = VermaVector.monomial(ctx, lam, (2,))
    assert z_apply(ctx, -1, highest_vector(ctx, lam)) == VermaVector.monomial(ctx, lam, (1,))
    assert z_apply(ctx, 1, w) == act_gen(ctx, ctx.gen_id(1, 2), w)


def test_z_apply_n2_lowering():
    ctx = make_algebra(3)
    lam = (20, 4, -11)
    out = z_apply(ctx, -1, highest_vector(ctx, lam))
    assert out.coefficient((0, 1, 0)).is_one()
    assert (1, 0, 1) in out.terms
    with pytest.raises(NotHighest):
        z_apply(ctx, 1, VermaVector.monomial(ctx, lam, (1, 0, 0)))


def test_relations_n1():
    rng = random.Random(7)
    for alpha in (0, 1):
        rep = verify_z_relations(1, alpha, [generic_weight(2, rng) for _ in range(2)])
        assert rep.passed, rep.failures[:3]


@pytest.mark.parametrize("alpha", [0, 1, 2])
def test_relations_n2(alpha):
    rng = random.Random(alpha)
    fams = None if alpha == 0 else ALPHA_FAMILIES
    rep = verify_z_relations(2, alpha, [generic_weight(3, rng)], families=fams)
    assert rep.passed, rep.failures[:3]
    assert rep.checks > 40


def test_mutated_gamma_is_flagged():
    class Mutant(ZCoefficientTable):
        def gamma(self, i):
            return -super().gamma(i)

    rep = verify_z_relations(2, 0, [generic_weight(3, random.Random(1))], table=Mutant(2, 0),
                             families=("z9",))
    assert rep.by_family["z9"][1] > 0


@pytest.mark.parametrize("n", [1, 2])
def test_inversion_identity(n):
    for alpha in range(n + 1):
        assert all(x.is_zero() for x in inversion_residuals(ZCoefficientTable(n, alpha)))


def test_classical_table_uses_plain_numbers():
    t = ClassicalZTable(2, 0, (5, 1, -3))
    # [phi_13 - 1] -> phi_13 - 1 = 5 + 3 + 2 - 1
    assert t.br(1, 3, -1) == Fraction(9)
    assert t.gamma(1) == Fraction(9) * Fraction(5 - 1 + 1 - 1, 5 - 1 + 1)


def test_normal_order_helper():
    t = ZCoefficientTable(1, 0)
    assert z_normal_order(t, (1, -1)) == ZAlgebra(1, 0, t).normalize((1, -1))
