import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from garding_lab.majorization import (
    DomainError,
    basic_lemma_check,
    check_majorization,
    check_gradient_form_consistency,
    diag_coefficient_check,
    gradient_det_bound,
    gradient_det_suite,
    ratio,
)
from garding_lab.matrix_core import random_spd
from garding_lab.operator import Det, MaLag, Norm2Det, QuadC, SigmaK
from garding_lab.poly_core import SparsePoly

seeds = st.integers(0, 2**31 - 1)


def test_ratio_value():
    # sigma2(diag(1,2,3)) = 11, sigma2(I) = 3, det = 6
    expected = (11 / 3) ** 0.5 / 6 ** (1 / 3)
    assert ratio(SigmaK(3, 2), np.diag([1.0, 2.0, 3.0])) == pytest.approx(expected, rel=1e-12)


def test_ratio_is_one_at_identity():
    assert ratio(MaLag(6), np.eye(6)) == pytest.approx(1.0, abs=1e-12)


@settings(max_examples=25, deadline=None)
@given(seeds, st.floats(0.1, 10.0))
def test_ratio_is_scale_invariant(seed, c):
    A = random_spd(3, seed=seed, spread=2.0)
    g = SigmaK(3, 2)
    assert ratio(g, c * A) == pytest.approx(ratio(g, A), rel=1e-10)


def test_majorization_small_run():
    rep = check_majorization(SigmaK(4, 2), samples=200, refine_iters=50)
    assert rep.passed and rep.sharp_at_identity
    assert rep.min_ratio >= 1 - 1e-6
    assert "equality regime" in rep.to_report().notes


def test_majorization_fails_for_non_dirichlet():
    with pytest.raises(DomainError):
        check_majorization(QuadC(1.5), samples=300, refine_iters=0)


def test_gradient_det_bound_equality_for_det():
    res = gradient_det_bound(Det(2), np.diag([1.0, 4.0]))
    assert res.passed
    assert res.det_value == pytest.approx(0.25, abs=1e-8)
    assert res.gamma == 0.25


def test_gradient_det_bound_outside_cone():
    with pytest.raises(ValueError):
        gradient_det_bound(Det(2), np.diag([1.0, -1.0]))


def test_gradient_det_suite_and_consistency():
    assert gradient_det_suite(SigmaK(3, 2), samples=30).passed
    assert check_gradient_form_consistency(Det(3), samples=30, refine_iters=10).passed


def test_basic_lemma_on_sigma2_restriction():
    p = SparsePoly(3, {(1, 1, 0): 1.0, (1, 0, 1): 1.0, (0, 1, 1): 1.0})
    rep = basic_lemma_check(p, samples=300)
    assert rep.passed and rep.margins["k"] == pytest.approx(2.0)


@pytest.mark.parametrize("eps", [0.1, 1.0])
def test_basic_lemma_hypothesis_two_violation(eps):
    p = SparsePoly(2, {(2, 0): eps, (1, 1): 1.0})
    rep = basic_lemma_check(p)
    assert not rep.passed
    assert rep.details["hypothesis_1"] and not rep.details["hypothesis_2"]
    assert "conclusion not asserted" in rep.notes


def test_basic_lemma_negative_coefficient():
    p = SparsePoly(2, {(2, 0): 1.0, (1, 1): -0.5, (0, 2): 1.0})
    rep = basic_lemma_check(p)
    assert not rep.details["hypothesis_1"]


def test_diag_coefficient_check():
    assert diag_coefficient_check(Norm2Det(3), h_samples=5).passed
    assert diag_coefficient_check(MaLag(4), h_samples=5).passed
    # after a 45 degree rotation the x1^2 coefficient is (1 - c) / 4
    s = 2**-0.5
    rep = diag_coefficient_check(QuadC(3.0), h_samples=0, extra_h=[[[s, -s], [s, s]]])
    assert not rep.passed and rep.witness is not None
