import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from qreduce import repbuilder as rb
from qreduce.pbw import make_algebra
from qreduce.qfield import classical_limit, eval_at, qbracket
from qreduce.repbuilder import (BetweenViolation, EmptyBox, ExtremalWeight, GTRow, InadmissibleRow)
from qreduce.verma import contravariant_form


def exps(n, total):
    return [r for r in itertools.product(range(total + 1), repeat=n) if sum(r) <= total]


@st.composite
def extremal(draw, n=2):
    lam = [draw(st.integers(-6, 6))]
    for _ in range(n):
        lam.append(lam[-1] - draw(st.integers(6, 10)))
    return tuple(lam)


def test_extremal_weight_validation():
    xw = ExtremalWeight(2, 1, (5, 2, -1))
    assert xw.mu == (5, -1, 2)
    assert ExtremalWeight(2, 2, (5, 2, -1)).mu == (5, 2, -1)
    assert ExtremalWeight(2, 0, (5, 2, -1)).mu == (2, -1, 5)
    with pytest.raises(ValueError):
        ExtremalWeight(2, 3, (5, 2, -1))
    with pytest.raises(ValueError):
        ExtremalWeight(2, 1, (1, 2, 0))
    with pytest.raises(ValueError):
        ExtremalWeight(2, 1, (1, 0))


def test_gt_row_labels():
    row = GTRow((4, 4, 1))
    assert row.l_labels == (3, 2, -2)
    with pytest.raises(ValueError):
        GTRow((1, 2))


def test_exponents():
    xw = ExtremalWeight(2, 1, (5, 2, -1))
    assert rb.exponents(xw, (7, -2)).r == (2, 1)
    assert not rb.exponents(xw, (4, -2)).is_valid()


def test_norm_examples_n1():
    lam = (9, 2)
    for alpha in (0, 1):
        xw = ExtremalWeight(1, alpha, lam)
        assert rb.shapovalov_norm(xw, (0,)).is_one()
    # the extremal vector carries e_11 -> lam_2 and e_22 -> lam_1 when alpha = 0
    assert rb.shapovalov_norm(ExtremalWeight(1, 0, lam), (1,)) == qbracket(7)
    assert rb.shapovalov_norm(ExtremalWeight(1, 1, lam), (1,)) == qbracket(7)
    with pytest.raises(ValueError):
        rb.shapovalov_norm(ExtremalWeight(1, 1, lam), (-1,))


@pytest.mark.parametrize("alpha", [0, 1, 2])
@given(lam=extremal())
@settings(max_examples=3, deadline=None)
def test_closed_equals_recursive(alpha, lam):
    xw = ExtremalWeight(2, alpha, lam)
    for r in exps(2, 3):
        assert rb.shapovalov_norm(xw, r) == rb.shapovalov_norm_recursive(xw, r)


def test_closed_equals_recursive_symbolic_n1():
    for alpha in (0, 1):
        for r in range(5):
            assert rb.shapovalov_symbolic(1, alpha, (r,)) == rb.shapovalov_cross_symbolic(1, alpha, (r,), (r,))


@pytest.mark.parametrize("alpha", [0, 1, 2])
def test_cross_terms_vanish(alpha):
    xw = ExtremalWeight(2, alpha, (3, -5, -14))
    for r, r2 in itertools.permutations(exps(2, 3), 2):
        if sum(r) == sum(r2):
            assert rb.shapovalov_cross(xw, r, r2).is_zero()


def test_compact_sign_relation():
    for n in (1, 2):
        for r in exps(n, 3):
            assert rb.compact_norm_symbolic(n, r) == rb.shapovalov_symbolic(n, 0, r) * (-1) ** sum(r)


def test_compact_norm_examples():
    assert rb.compact_norm((6, 1), (1,)) == qbracket(5)
    assert rb.compact_norm((6, 1, 0), (0, 0)).is_one()


def test_compact_anchor_n1():
    ctx = make_algebra(2)
    for lam in ((4, 0), (3, 8), (11, -2)):
        for r in range(6):
            assert rb.compact_norm(lam, (r,)) == contravariant_form(ctx, (r,), (r,), lam)


def test_branching_examples():
    xw = ExtremalWeight(2, 2, (3, 1, 0))
    rows = [r.lam for r in rb.branching(xw, [(-5, 5), (-5, 5)])]
    assert sorted(rows) == [(a, b) for a in (3, 4, 5) for b in (1, 2, 3)]
    xw1 = ExtremalWeight(2, 1, (3, 1, 0))
    for row in rb.branching(xw1, [(-4, 6), (-4, 6)]):
        assert row.lam[0] >= 3 and 0 >= row.lam[1]
    xw0 = ExtremalWeight(2, 0, (3, 1, 0))
    for row in rb.branching(xw0, [(-4, 6), (-4, 6)]):
        assert 1 >= row.lam[0] >= 0 >= row.lam[1]
    with pytest.raises(EmptyBox):
        rb.branching(xw, [(2, 1), (0, 0)])


@pytest.mark.parametrize("alpha", [0, 1, 2])
def test_positivity_matches_branching(alpha):
    xw = ExtremalWeight(2, alpha, (5, 2, -1))
    rep = rb.positivity_scan(xw, [(-4, 9), (-6, 5)])
    assert rep.matches_branching
    assert rep.limit_mismatch == []
    assert rep.admissible


def test_positivity_boundary_rows():
    xw = ExtremalWeight(2, 1, (5, 2, -1))
    # at alpha = 1 both constraints bound an exponent, so crossing them leaves no vector
    for row in [(4, -1), (5, 0)]:
        assert not rb.exponents(xw, row).is_valid()
    xw2 = ExtremalWeight(2, 2, (5, 2, -1))
    r = rb.exponents(xw2, (6, 6))  # lam_22 = lam_13 + 1
    assert eval_at(rb.shapovalov_norm(xw2, r), Fraction(1, 2)) <= 0
    xw0 = ExtremalWeight(2, 0, (5, 2, -1))
    r = rb.exponents(xw0, (-2, -2))  # lam_12 = lam_33 - 1 breaks the second chain
    assert rb.shapovalov_norm(xw0, r).is_zero()


def test_positivity_sample_validation():
    xw = ExtremalWeight(2, 1, (5, 2, -1))
    with pytest.raises(ValueError):
        rb.positivity_scan(xw, [(0, 1), (0, 1)], q_samples=(Fraction(1),))


def test_null_vectors_propagate():
    # at alpha = 0 the rows deep below the wall are generated by a null vector
    rep = rb.positivity_scan(ExtremalWeight(2, 0, (3, 1, 0)), [(-5, 8), (-5, 5)])
    assert rep.beyond_null
    assert rep.matches_branching


def test_wall_at_small_gap():
    # lam_2 - lam_3 = 1 makes [lam_2 - lam_3 - 1] vanish for every r_2 >= 1
    xw = ExtremalWeight(2, 2, (3, 1, 0))
    assert rb.shapovalov_norm(xw, (0, 1)).is_zero()
    assert not rb.shapovalov_norm(xw, (1, 0)).is_zero()


@pytest.mark.parametrize("alpha", [0, 1, 2])
@pytest.mark.parametrize("lam", [(5, 2, -1), (7, 3, 0)])
def test_normalization_identity(alpha, lam):
    xw = ExtremalWeight(2, alpha, lam)
    rows = [row for row in rb.branching(xw, [(-3, 10), (-3, 10)]) if rb.exponents(xw, row).total <= 3]
    assert len(rows) >= 9
    for row in rows:
        r = rb.exponents(xw, row)
        assert (rb.normalization_factor(xw, row) * rb.shapovalov_norm(xw, r)).is_one()


def test_normalization_n1():
    for alpha in (0, 1):
        xw = ExtremalWeight(1, alpha, (6, 1))
        for row in rb.branching(xw, [(-3, 10)]):
            r = rb.exponents(xw, row)
            if r.total <= 3:
                assert (rb.normalization_factor(xw, row) * rb.shapovalov_norm(xw, r)).is_one()


def test_normalization_errors():
    xw = ExtremalWeight(2, 1, (5, 2, -1))
    assert rb.normalization_factor(xw, (5, -1)).is_one()
    with pytest.raises(InadmissibleRow):
        rb.normalization_factor(xw, (4, -1))


def test_gt_norms():
    assert rb.gt_lowering_norm((5, 2), (5, 2, 0)).is_one()
    with pytest.raises(BetweenViolation):
        rb.gt_lowering_norm((6,), (5, 2))
    for up in ((5, 2), (9, -1)):
        for low in range(up[1], up[0] + 1):
            g = rb.gt_lowering_norm((low,), up)
            assert (g * rb.compact_norm(up, rb.gt_exponents((low,), up))).is_one()
    for up in ((5, 2, 0), (6, 1, -2)):
        for low in itertools.product(range(-3, 7), repeat=2):
            if rb.between(up, low):
                g = rb.gt_lowering_norm(low, up)
                assert (g * rb.compact_norm(up, rb.gt_exponents(low, up))).is_one()
                assert classical_limit(g) == rb.gt_lowering_norm_classical(low, up)


def test_patterns():
    xw = ExtremalWeight(2, 2, (3, 1, 0))
    pats = rb.enumerate_patterns(xw, 5)
    assert len(pats) == 27
    assert all(p.validate() for p in pats)
    assert len({p.rows for p in pats}) == 27


def test_patterns_forced_box():
    xw = ExtremalWeight(2, 1, (3, 1, 0))
    pats = rb.enumerate_patterns(xw, 0, box=[(3, 3), (0, 0)])
    assert [tuple(r.lam for r in p.rows) for p in pats] == [((3, 0), (a,)) for a in (3, 2, 1, 0)]
    assert pats[0].exponents.r == (0, 0)
    assert pats[0].normalization().is_one()


def test_u21_reference_data():
    assert rb.u21_reference_check((2, 0)) == [("m12", 0, "m13", 1), ("m13", 1, "m22", 0),
                                              ("m22", 0, "m23", 1), ("m12", 0, "m11", 0),
                                              ("m11", 0, "m22", 0)]
    text = [rb.format_inequality(x) for x in rb.u21_reference_check((1, 1))]
    assert text == ["m12 >= m13+1", "m33-1 >= m22", "m12 >= m11", "m11 >= m22"]
    text = [rb.format_inequality(x) for x in rb.u21_reference_check((0, 2))]
    assert text[:3] == ["m23-1 >= m12", "m12 >= m33-1", "m33-1 >= m22"]
    with pytest.raises(ValueError):
        rb.u21_reference_check((3, 0))


@pytest.mark.parametrize("lam", [(5, 2, -1), (7, 3, 0), (3, 1, 0)])
def test_u21_schemes_reproduce_branching(lam):
    box = [(-4, 9), (-4, 9)]
    for alpha in range(3):
        xw = ExtremalWeight(2, alpha, lam)
        assert rb.u21_scheme_rows(xw, box) == [r.lam for r in rb.branching(xw, box)]


def test_shift_is_fixed_up_to_the_free_slot():
    box = [(-4, 9), (-4, 9)]
    for alpha in range(3):
        fits = rb.fit_u21_shift(ExtremalWeight(2, alpha, (5, 2, -1)), box)
        free = alpha  # 0-based slot of the noncompact component
        assert rb.U21_SHIFT[alpha] in fits
        assert {tuple(s[k] for k in range(3) if k != free) for s in fits} == \
            {tuple(rb.U21_SHIFT[alpha][k] for k in range(3) if k != free)}


def test_classical_oracle():
    count = 0
    for alpha in range(3):
        xw = ExtremalWeight(2, alpha, (5, 2, -1))
        for row in rb.branching(xw, [(-3, 9), (-3, 9)]):
            r = rb.exponents(xw, row)
            if r.total > 3:
                continue
            assert classical_limit(rb.shapovalov_norm(xw, r)) == rb.shapovalov_norm_classical(xw, r)
            assert classical_limit(rb.normalization_factor(xw, row)) == rb.normalization_factor_classical(xw, row)
            count += 2
    assert count >= 40
