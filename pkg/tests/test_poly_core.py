import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from garding_lab.matrix_core import DimensionError
from garding_lab.poly_core import (
    SparsePoly,
    coefficients_from_evaluator,
    poly_directional_derivative,
    poly_eval,
)

NVARS = 3


@st.composite
def polys(draw, max_degree=3, homogeneous_degree=None):
    count = draw(st.integers(0, 5))
    terms = {}
    for _ in range(count):
        if homogeneous_degree is None:
            alpha = tuple(draw(st.integers(0, max_degree)) for _ in range(NVARS))
        else:
            cut = sorted(draw(st.integers(0, homogeneous_degree)) for _ in range(NVARS - 1))
            bounds = [0] + cut + [homogeneous_degree]
            alpha = tuple(bounds[i + 1] - bounds[i] for i in range(NVARS))
        terms[alpha] = draw(st.integers(-5, 5))
    return SparsePoly(NVARS, terms)


points = st.lists(st.floats(-2, 2), min_size=NVARS, max_size=NVARS).map(np.array)


def test_pruning_and_zero():
    p = SparsePoly(2, {(1, 0): 1e-15, (0, 1): 2.0})
    assert p.terms == {(0, 1): 2.0}
    assert SparsePoly.zero(2).is_zero()


def test_bad_exponent_length():
    with pytest.raises(DimensionError):
        SparsePoly(2, {(1, 0, 0): 1.0})


def test_graded_lex_serialization():
    p = SparsePoly(2, {(0, 1): 1.0, (2, 0): 3.0, (1, 1): 2.0, (0, 0): 5.0})
    assert [t["alpha"] for t in p.to_json()] == [[2, 0], [1, 1], [0, 1], [0, 0]]
    assert SparsePoly.from_json(2, p.to_json()) == p


def test_eval_of_product():
    x1, x2 = SparsePoly.variable(2, 0), SparsePoly.variable(2, 1)
    p = x1 * (x1 * 0.5 + x2)
    assert p(np.array([2.0, 3.0])) == 2.0 + 6.0
    np.testing.assert_allclose(poly_eval(p, np.array([[2.0, 3.0], [1.0, 0.0]])), [8.0, 0.5])


@settings(max_examples=60, deadline=None)
@given(polys(), polys(), points)
def test_multiplication_is_pointwise(p, q, x):
    assert np.isclose((p * q)(x), p(x) * q(x), rtol=1e-9, atol=1e-9)


@settings(max_examples=60, deadline=None)
@given(polys(), polys())
def test_leibniz_rule(p, q):
    for i in range(NVARS):
        lhs = (p * q).partial(i)
        rhs = p.partial(i) * q + p * q.partial(i)
        assert lhs.allclose(rhs, atol=1e-9)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 4).flatmap(lambda N: st.tuples(st.just(N), polys(homogeneous_degree=N))), points)
def test_euler_identity(Np, x):
    N, p = Np
    lhs = poly_directional_derivative(p, x)(x)
    assert np.isclose(lhs, N * p(x), rtol=1e-9, atol=1e-8)


@settings(max_examples=40, deadline=None)
@given(polys(max_degree=2))
def test_recovery_from_evaluations_round_trip(p):
    q = coefficients_from_evaluator(p, 6, NVARS)
    assert q.allclose(p, atol=1e-8)


def test_recovery_vectorized_matches_scalar():
    p = SparsePoly(2, {(3, 1): 2.0, (0, 4): -1.0, (2, 2): 0.5})
    a = coefficients_from_evaluator(p, 4, 2)
    b = coefficients_from_evaluator(lambda X: poly_eval(p, X), 4, 2, vectorized=True)
    assert a.allclose(p, atol=1e-10) and b.allclose(p, atol=1e-10)


def test_recovery_of_high_degree_is_well_conditioned():
    # (x1 + x2)^8 has binomial coefficients up to 70
    x = SparsePoly.linear([1.0, 1.0])
    p = x**8
    q = coefficients_from_evaluator(p, 8, 2)
    assert q.allclose(p, atol=1e-8)
    assert q.coeff((4, 4)) == pytest.approx(70.0)


def test_nvars_mismatch():
    with pytest.raises(DimensionError):
        SparsePoly.variable(2, 0) + SparsePoly.variable(3, 0)
