import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from garding_lab.garding_analysis import (
    NonRealSpectrumError,
    check_central,
    check_cone_transfer,
    check_dirichlet,
    check_hyperbolic,
    garding_eigenvalues,
    garding_laplacian,
    gradient,
    in_garding_cone,
    interlace_check,
    interlace_suite,
    lemma22_check,
    univariate_profile,
)
from garding_lab.matrix_core import random_orthogonal, random_spd, random_symmetric
from garding_lab.operator import (
    Conjugate,
    Det,
    LinearTransform,
    MaLag,
    QuadC,
    RadialDerivative,
    SigmaK,
    from_spec,
    trace_shift_map,
)

seeds = st.integers(0, 2**31 - 1)

NONCENTRAL = {"op": "symbolic", "nvars_n": 2,
              "terms": [{"alpha": [2, 0, 0], "coeff": 1.0}, {"alpha": [1, 0, 1], "coeff": 1.0}]}


def test_profile_of_det3():
    A = np.diag([1.0, 2.0, 3.0])
    np.testing.assert_allclose(univariate_profile(Det(3), np.eye(3), A), [1, 6, 11, 6], atol=1e-9)
    np.testing.assert_allclose(univariate_profile(SigmaK(3, 2), np.eye(3), A), [3, 12, 11], atol=1e-9)


def test_eigenvalues_of_det_are_matrix_eigenvalues():
    ev = garding_eigenvalues(Det(3), np.eye(3), np.diag([1.0, 3.0, 2.0]))
    np.testing.assert_allclose(ev.values, [3, 2, 1], atol=1e-10)
    assert len(ev) == 3


def test_eigenvalues_of_sigma2():
    ev = garding_eigenvalues(SigmaK(3, 2), np.eye(3), np.diag([1.0, 2.0, 3.0]))
    r = math.sqrt(1 / 3)
    np.testing.assert_allclose(ev.values, [2 + r, 2 - r], atol=1e-9)


def test_eigenvalues_at_identity_are_one():
    for g in (Det(4), SigmaK(4, 2), MaLag(4), MaLag(8)):
        ev = garding_eigenvalues(g, np.eye(g.n), np.eye(g.n))
        np.testing.assert_allclose(ev.values, np.ones(g.N), atol=1e-8)


def test_non_real_spectrum_raises():
    with pytest.raises(NonRealSpectrumError) as info:
        garding_eigenvalues(QuadC(-1.0), np.eye(2), np.array([[0.0, 1.0], [1.0, 0.0]]))
    assert info.value.residual > 0.5


def test_ma_lag_eigenvalues_are_sign_pattern_sums(rng):
    g = MaLag(4)
    A = random_symmetric(4, rng)
    # tr(tI)/2 = m t, so the factors are eigenvalues in direction I/m
    ev = garding_eigenvalues(g, np.eye(4) / 2, A).values
    np.testing.assert_allclose(ev, np.sort(g.factors(A))[::-1], atol=1e-8)
    ev_I = garding_eigenvalues(g, np.eye(4), A).values
    np.testing.assert_allclose(ev_I, ev / 2, atol=1e-8)


def test_hyperbolicity_suite():
    assert check_hyperbolic(MaLag(4), samples=100).passed
    bad = check_hyperbolic(QuadC(-1.0), samples=100)
    assert not bad.passed and bad.witness is not None


def test_dirichlet_suite():
    assert check_dirichlet(SigmaK(3, 2), samples=200).passed
    assert not check_dirichlet(QuadC(1.5), samples=200).passed


def test_cone_membership_sigma2():
    g = SigmaK(3, 2)
    assert in_garding_cone(g, np.diag([-0.4, 1.0, 1.0])).member
    # sigma2 vanishes at diag(-0.5, 1, 1)
    assert not in_garding_cone(g, np.diag([-0.5, 1.0, 1.0])).member
    assert not in_garding_cone(g, -np.eye(3)).member


def test_gradient_of_det():
    np.testing.assert_allclose(gradient(Det(2), np.diag([1.0, 4.0])), np.diag([4.0, 1.0]), atol=1e-8)


@settings(max_examples=20, deadline=None)
@given(seeds)
def test_black_box_gradient_matches_cofactor(seed):
    A = random_spd(3, seed=seed)
    g = RadialDerivative(Det(3), check=False)  # sigma2 via the black-box path
    expected = np.trace(A) * np.eye(3) - A  # gradient of sigma2
    np.testing.assert_allclose(gradient(g, A), expected, rtol=1e-6, atol=1e-6)


def test_centrality():
    r = check_central(SigmaK(4, 2))
    assert r.central and r.k == pytest.approx(3.0, abs=1e-8)
    r = check_central(from_spec(NONCENTRAL))
    assert not r.central
    np.testing.assert_allclose(r.gradient_at_I, np.diag([3.0, 1.0]), atol=1e-8)


@settings(max_examples=20, deadline=None)
@given(seeds)
def test_laplacian_of_det_is_trace(seed):
    A = random_symmetric(4, np.random.default_rng(seed))
    assert garding_laplacian(Det(4), A) == pytest.approx(np.trace(A), abs=1e-8)


@settings(max_examples=20, deadline=None)
@given(seeds)
def test_conjugation_transfers_eigenvalues(seed):
    rng = np.random.default_rng(seed)
    g = SigmaK(4, 2)
    h = random_orthogonal(4, rng=rng)
    A = random_symmetric(4, rng)
    lhs = garding_eigenvalues(Conjugate(g, h, check=False), np.eye(4), A).values
    rhs = garding_eigenvalues(g, np.eye(4), h @ A @ h.T).values
    np.testing.assert_allclose(lhs, rhs, atol=1e-8)


def test_interlacing():
    assert interlace_suite(SigmaK(4, 2), samples=50).passed
    assert interlace_check(MaLag(4), np.diag([1.0, -2.0, 0.5, 3.0])).passed


def test_lemma22():
    rep = lemma22_check(QuadC(0.5), trials=20)
    assert rep.passed and rep.margins["gradient_transfer_max_rel_error"] <= 1e-6
    rep = lemma22_check(from_spec(NONCENTRAL), trials=5)
    assert rep.passed and any("not applicable" in n for n in rep.notes)


def test_cone_transfer():
    assert check_cone_transfer(LinearTransform(Det(3), trace_shift_map(3)), samples=60).passed


@pytest.mark.parametrize("g", [Det(3), SigmaK(4, 2), SigmaK(4, 3)], ids=lambda g: g.name)
def test_spectral_gradient_matches_finite_differences(g, rng):
    A = random_spd(g.n, rng=rng)
    fd = gradient(Conjugate(g, np.eye(g.n), check=False), A)  # forces the black-box path
    np.testing.assert_allclose(gradient(g, A), fd, rtol=1e-7, atol=1e-7)
