import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from garding_lab.catalog import certified_catalog, hyperbolic_catalog
from garding_lab.matrix_core import DimensionError, random_orthogonal, random_symmetric
from garding_lab.operator import (
    Conjugate,
    Det,
    LinearMap,
    LinearTransform,
    MaLag,
    Norm2Det,
    OrthogonalityError,
    Product,
    QuadC,
    RadialDerivative,
    SigmaK,
    SpecError,
    SymbolicOperator,
    HomogeneityError,
    diagonal_restriction,
    evaluate,
    from_spec,
    symbolic_det,
    symbolic_norm2,
    trace_shift_map,
)
from garding_lab.poly_core import SparsePoly

seeds = st.integers(0, 2**31 - 1)


def test_det_and_sigma_on_diagonal():
    A = np.diag([1.0, 2.0, 3.0])
    assert Det(3)(A) == pytest.approx(6.0)
    assert SigmaK(3, 2)(A) == pytest.approx(11.0)
    assert SigmaK(3, 1)(A) == pytest.approx(6.0)


def test_quad_c_literal_formula():
    assert QuadC(0.5)(np.array([[2.0, 1.0], [1.0, 1.0]])) == pytest.approx(1.5)


def test_ma_lag_at_identity():
    assert MaLag(4).at_identity() == 16.0
    assert MaLag(6).at_identity() == 6561.0


def test_radial_derivative_values():
    A = np.diag([1.0, 2.0, 3.0])
    assert RadialDerivative(Det(3))(A) == pytest.approx(11.0)
    assert RadialDerivative(RadialDerivative(Det(3)))(A) == pytest.approx(12.0)


def test_linear_transform_trace_shift():
    g = LinearTransform(Det(2), trace_shift_map(2))
    # diag(1,2) + 3 I = diag(4,5)
    assert g(np.diag([1.0, 2.0])) == pytest.approx(20.0)
    assert g.flags == {"garding_dirichlet": True, "i_central": True}
    assert g.checks["positive_image"]["note"] == "sampled, not proven"


def test_linear_map_adjoint_for_trace_inner_product(rng):
    n = 3
    L = LinearMap(n, rng.standard_normal((6, 6)))
    A, B = random_symmetric(n, rng), random_symmetric(n, rng)
    assert np.trace(L(A) @ B) == pytest.approx(np.trace(A @ L.adjoint()(B)))


@settings(max_examples=25, deadline=None)
@given(seeds, st.integers(1, 3))
def test_symbolic_det_agrees_with_spectral(seed, n):
    A = random_symmetric(n, np.random.default_rng(seed))
    assert symbolic_det(n)(A) == pytest.approx(Det(n)(A), abs=1e-10)


def test_symbolic_norm2_det_agrees(rng):
    g = Product(symbolic_norm2(3), symbolic_det(3))
    h = Norm2Det(3)
    for _ in range(20):
        A = random_symmetric(3, rng)
        assert g(A) == pytest.approx(h(A), rel=1e-10, abs=1e-10)


def test_inhomogeneous_symbolic_rejected():
    poly = SparsePoly(3, {(1, 0, 0): 1.0, (0, 0, 2): 1.0})
    with pytest.raises(HomogeneityError):
        SymbolicOperator(2, poly)


@pytest.mark.parametrize("g", list(certified_catalog().values()), ids=lambda g: g.name)
def test_catalog_is_homogeneous(g):
    assert g.check_homogeneity() <= 1e-9


def test_catalog_membership():
    cat = certified_catalog()
    assert len(cat) == 16
    assert "norm2_det[3]" in cat and "norm2_det[3]" not in hyperbolic_catalog()
    assert all(g.flags["i_central"] for g in cat.values())


def test_conjugate_requires_orthogonal():
    with pytest.raises(OrthogonalityError):
        Conjugate(Det(2), [[1.0, 1.0], [0.0, 1.0]])


def test_conjugate_of_det_is_det(rng):
    h = random_orthogonal(3, rng=rng)
    g = Conjugate(Det(3), h)
    A = random_symmetric(3, rng)
    assert g(A) == pytest.approx(Det(3)(A), abs=1e-12)


def test_product_dimension_mismatch():
    with pytest.raises(DimensionError):
        Product(Det(2), Det(3))


def test_values_batches_match_calls(rng):
    for g in certified_catalog().values():
        As = np.stack([random_symmetric(g.n, rng) for _ in range(5)])
        np.testing.assert_allclose(g.values(As), [g(A) for A in As], rtol=1e-9, atol=1e-9)


def test_evaluate_rejects_wrong_size():
    with pytest.raises(DimensionError):
        evaluate(Det(3), np.eye(2))


# diagonal restriction


def test_diagonal_restriction_of_sigma2():
    p = diagonal_restriction(SigmaK(3, 2))
    expected = SparsePoly(3, {(1, 1, 0): 1.0, (1, 0, 1): 1.0, (0, 1, 1): 1.0})
    assert p.allclose(expected, atol=1e-10)


def test_diagonal_restriction_quad_c_rotated():
    s = 1 / math.sqrt(2)
    h = np.array([[s, -s], [s, s]])
    p = diagonal_restriction(QuadC(0.5), h)
    assert p.coeff((2, 0)) == pytest.approx(0.125, abs=1e-9)
    assert p.coeff((1, 1)) == pytest.approx(0.75, abs=1e-9)
    assert p.coeff((0, 2)) == pytest.approx(0.125, abs=1e-9)


def test_diagonal_restriction_ma_lag_high_degree(rng):
    g = MaLag(6)
    h = random_orthogonal(6, rng=rng)
    p = diagonal_restriction(g, h)
    x = np.exp(rng.uniform(-1, 1, size=6))
    direct = g(h @ np.diag(x) @ h.T)
    assert p(x) == pytest.approx(direct, rel=1e-8)


# spec trees


def test_spec_round_trip():
    node = {"op": "product", "args": [{"op": "sigma_k", "n": 3, "k": 2},
                                      {"op": "radial_derivative", "args": [{"op": "det", "n": 3}]}]}
    g = from_spec(node)
    assert g.N == 4
    assert from_spec(json.loads(json.dumps(g.spec()))).name == g.name


def test_spec_radial_derivative_of_det3_is_sigma2(rng):
    g = from_spec({"op": "radial_derivative", "args": [{"op": "det", "n": 3}]})
    s2 = SigmaK(3, 2)
    for _ in range(100):
        A = random_symmetric(3, rng)
        assert abs(g(A) - s2(A)) <= 1e-9


def test_spec_symbolic_and_linear_transform():
    sym = {"op": "symbolic", "nvars_n": 2,
           "terms": [{"alpha": [1, 0, 1], "coeff": 1.0}, {"alpha": [0, 2, 0], "coeff": -1.0}]}
    g = from_spec(sym)
    A = np.array([[2.0, 1.0], [1.0, 3.0]])
    assert g(A) == pytest.approx(5.0)
    L = trace_shift_map(2).to_dict()
    gl = from_spec({"op": "linear_transform", "L": L, "args": [sym]})
    assert gl(np.diag([1.0, 2.0])) == pytest.approx(20.0)


@pytest.mark.parametrize(
    "node, where",
    [
        ({"op": "nope"}, "$"),
        ({"op": "product", "args": [{"op": "det", "n": 2}, {"op": "det", "n": 3}]}, "$"),
        ({"op": "radial_derivative", "args": [{"op": "det"}]}, "$.args[0]"),
        ({"op": "conjugate", "h": [[1, 1], [0, 1]], "args": [{"op": "det", "n": 2}]}, "$"),
    ],
)
def test_spec_errors_carry_location(node, where):
    with pytest.raises(SpecError) as info:
        from_spec(node)
    assert info.value.path == where
