import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hmono.checks.cost import (
    G,
    CostFunction,
    QuadratureSpec,
    a_matrix,
    build_cost,
    cross_det_residual,
    eval_h,
    grad_h,
    hess_h,
    laplacian_h,
    phi,
    sphere_extremes,
)
from hmono.errors import DimensionMismatchError, UnsupportedInputError

coords = st.floats(min_value=-2.0, max_value=2.0, allow_nan=False, allow_infinity=False)


def test_eval_h_examples():
    assert eval_h(build_cost(2, 2), [3.0, 4.0]) == pytest.approx(25.0)
    assert eval_h(build_cost(1, 3), [-2.0]) == pytest.approx(8.0)
    assert eval_h(build_cost(2, 2, "weighted", [1, 4]), [1.0, 1.0]) == pytest.approx(5.0)


def test_eval_h_preserves_leading_shape():
    c = build_cost(3, 4)
    values = eval_h(c, np.ones((5, 2, 3)))
    assert values.shape == (5, 2)
    assert np.allclose(values, 9.0)


def test_grad_h_examples():
    assert np.allclose(grad_h(build_cost(2, 2), [3.0, 4.0]), [6.0, 8.0])
    assert np.allclose(grad_h(build_cost(1, 4), [2.0]), [32.0])
    assert np.allclose(grad_h(build_cost(3, 3), np.zeros(3)), 0.0)


def test_hess_h_examples():
    assert np.allclose(hess_h(build_cost(2, 2), [0.6, 0.8]), 2 * np.eye(2))
    assert np.allclose(hess_h(build_cost(2, 4), [1.0, 0.0]), np.diag([12.0, 4.0]))


def test_laplacian_is_hessian_trace():
    c = build_cost(3, 2)
    assert laplacian_h(c, [0.3, -0.1, 2.0]) == pytest.approx(6.0)


@settings(max_examples=60)
@given(
    x=st.lists(coords, min_size=3, max_size=3),
    p=st.sampled_from([2.0, 3.0, 4.0, 2.5]),
)
def test_hessian_matches_finite_differences_of_gradient(x, p):
    x = np.asarray(x)
    if np.linalg.norm(x) < 0.5:
        x = x + 0.5
    c = CostFunction(3, p)
    step = 1e-5
    fd = np.empty((3, 3))
    for j in range(3):
        e = np.zeros(3)
        e[j] = step
        fd[:, j] = (grad_h(c, x + e) - grad_h(c, x - e)) / (2 * step)
    scale = 1 + np.linalg.norm(x) ** (p - 2)
    assert np.abs(hess_h(c, x) - fd).max() < 1e-6 * scale


def test_weighted_hessian_matches_finite_differences():
    c = CostFunction(2, 3, "weighted", (1.0, 4.0))
    x = np.array([0.7, -0.4])
    step = 1e-5
    fd = np.column_stack(
        [(grad_h(c, x + step * e) - grad_h(c, x - step * e)) / (2 * step) for e in np.eye(2)]
    )
    assert np.allclose(hess_h(c, x), fd, atol=1e-6)


def test_dimension_mismatch_is_rejected():
    with pytest.raises(DimensionMismatchError):
        eval_h(build_cost(2, 2), [1.0, 2.0, 3.0])


def test_p_below_two_is_unsupported():
    with pytest.raises(UnsupportedInputError):
        CostFunction(2, 1.5)


def test_weighted_cost_validation():
    with pytest.raises(ValueError):
        CostFunction(2, 2, "weighted", (1.0,))
    with pytest.raises(ValueError):
        CostFunction(2, 2, "weighted", (1.0, -1.0))


@pytest.mark.parametrize("n", [2, 3, 4])
@pytest.mark.parametrize("p", [2.0, 3.0, 4.0])
def test_isotropic_sphere_extremes_are_analytic(n, p):
    ext = build_cost(n, p).extremes
    assert (ext.m, ext.M, ext.grad_max) == (1.0, 1.0, p)
    assert ext.lam == pytest.approx(p)
    assert ext.Lam == pytest.approx(p * (p - 1))
    assert ext.analytic


def test_one_dimensional_extremes_have_only_the_radial_eigenvalue():
    ext = build_cost(1, 3).extremes
    assert ext.lam == ext.Lam == pytest.approx(6.0)


def test_weighted_extremes_planar():
    ext = sphere_extremes(CostFunction(2, 2, "weighted", (1.0, 4.0)))
    assert ext.m == pytest.approx(1.0, abs=1e-6)
    assert ext.M == pytest.approx(4.0, abs=1e-6)
    assert not ext.analytic


def test_weighted_extremes_match_dense_sphere_scan():
    c = CostFunction(3, 3, "weighted", (1.0, 2.0, 3.0))
    ext = sphere_extremes(c)
    rng = np.random.default_rng(0)
    theta = rng.normal(size=(200_000, 3))
    theta /= np.linalg.norm(theta, axis=1, keepdims=True)
    values = eval_h(c, theta)
    assert ext.m <= values.min() + 1e-9
    assert ext.M >= values.max() - 1e-9
    assert ext.m == pytest.approx(1.0, abs=1e-5)
    assert ext.M == pytest.approx(3.0**1.5, abs=1e-5)


def test_G_examples():
    c = build_cost(2, 2)
    assert G(c, [1.0, 0.0], [0.0, 1.0]) == pytest.approx(0.0)
    assert G(c, [1.0, 0.0], [1.0, 0.0]) == pytest.approx(-2.0)
    assert G(build_cost(1, 3), [2.0], [1.0]) == pytest.approx(-8.0)


def test_a_matrix_is_constant_for_quadratic_cost(rng):
    c = build_cost(3, 2)
    x, y, tx, ty = rng.normal(size=(4, 3))
    result = a_matrix(c, x, y, tx, ty)
    assert np.allclose(result.value, 2 * np.eye(3), atol=1e-12)


def test_a_matrix_vanishes_without_displacement():
    c = build_cost(2, 4)
    y = np.array([0.3, 0.2])
    result = a_matrix(c, y, y, y, y)
    assert np.allclose(result.value, 0.0)


def test_a_matrix_one_dimensional_quartic():
    # z(s, t) = t - s and D^2 h = 12 z^2 integrate to 12 / 6
    result = a_matrix(build_cost(1, 4), [1.0], [0.0], [1.0], [0.0])
    assert result.value[0, 0] == pytest.approx(2.0, abs=1e-8)


def test_phi_examples(rng):
    assert phi(build_cost(2, 2), *rng.normal(size=(4, 2))).value == pytest.approx(1.0)
    assert phi(build_cost(1, 4), [1.0], [0.0], [1.0], [0.0]).value == pytest.approx(1 / 6, abs=1e-8)
    y = np.array([0.5])
    assert phi(build_cost(1, 3), y, y, y, y).value == pytest.approx(0.0)


def test_phi_with_kink_inside_square_converges():
    # |t - s| integrates to 1 / 3
    result = phi(build_cost(1, 3), [1.0], [0.0], [1.0], [0.0], QuadratureSpec(order=8))
    assert result.value == pytest.approx(1 / 3, abs=1e-8)


def test_quadrature_spec_validation():
    with pytest.raises(ValueError):
        QuadratureSpec(order=1)
    with pytest.raises(ValueError):
        QuadratureSpec(tolerance=0.0)


@pytest.mark.parametrize(
    "n, p, d, limit",
    [(2, 2, [1.0, 0.0], 1e-6), (2, 4, [1.0, 1.0], 1e-5), (3, 3, [1.0, 0.0, 0.0], 1e-5)],
)
def test_cross_det_residual(n, p, d, limit):
    c = build_cost(n, p)
    assert cross_det_residual(c, d, np.zeros(n)) < limit


def test_cross_det_needs_distinct_points():
    c = build_cost(2, 3)
    with pytest.raises(UnsupportedInputError):
        cross_det_residual(c, [1.0, 1.0], [1.0, 1.0])


def test_cost_serialisation():
    c = build_cost(2, 3, "weighted", [1.0, 2.0])
    again = CostFunction.from_dict(c.to_dict())
    assert again.to_dict() == {"family": "weighted", "n": 2, "p": 3, "weights": [1.0, 2.0]}
    assert math.isclose(eval_h(again, [1.0, 1.0]), eval_h(c, [1.0, 1.0]))


families = st.sampled_from(["isotropic", "weighted"])
exponents = st.sampled_from([2.0, 2.5, 3.0, 4.0])
dims = st.integers(min_value=1, max_value=3)
points = st.lists(coords, min_size=3, max_size=3)


def _cost(family: str, n: int, p: float) -> CostFunction:
    weights = (1.0, 2.0, 3.0)[:n] if family == "weighted" else None
    return CostFunction(n, p, family, weights)


def _point(values, n: int) -> np.ndarray:
    x = np.asarray(values[:n])
    if np.linalg.norm(x) < 0.5:
        x = x + 0.5
    return x


@settings(max_examples=100)
@given(
    family=families,
    n=dims,
    p=exponents,
    values=points,
    scale=st.floats(min_value=0.1, max_value=10.0),
)
def test_cost_is_homogeneous(family, n, p, values, scale):
    c = _cost(family, n, p)
    x = _point(values, n)
    assert eval_h(c, scale * x) == pytest.approx(scale**p * eval_h(c, x), rel=1e-10)
    assert np.allclose(grad_h(c, scale * x), scale ** (p - 1) * grad_h(c, x), rtol=1e-10, atol=0)
    assert laplacian_h(c, scale * x) == pytest.approx(scale ** (p - 2) * laplacian_h(c, x), rel=1e-10)


@given(family=families, n=dims, p=exponents, values=points)
def test_cost_is_even(family, n, p, values):
    c = _cost(family, n, p)
    x = np.asarray(values[:n])
    assert eval_h(c, -x) == pytest.approx(eval_h(c, x), rel=1e-14, abs=0)
    assert np.allclose(grad_h(c, -x), -grad_h(c, x), rtol=1e-14, atol=0)


@given(
    family=families,
    n=dims,
    p=exponents,
    values=points,
    direction=points,
)
def test_hessian_quadratic_form_is_nonnegative(family, n, p, values, direction):
    c = _cost(family, n, p)
    x = _point(values, n)
    xi = np.asarray(direction[:n])
    assert xi @ hess_h(c, x) @ xi >= 0


@settings(max_examples=60)
@given(family=families, n=dims, p=exponents, values=points)
def test_gradient_matches_finite_differences_of_cost(family, n, p, values):
    c = _cost(family, n, p)
    x = _point(values, n)
    step = 1e-5
    fd = np.array([(eval_h(c, x + step * e) - eval_h(c, x - step * e)) / (2 * step) for e in np.eye(n)])
    g = grad_h(c, x)
    assert np.linalg.norm(g - fd) <= 1e-6 * (1 + np.linalg.norm(g))


unit_coords = st.floats(min_value=-1.0, max_value=1.0, allow_nan=False, allow_infinity=False)
tuples = st.lists(unit_coords, min_size=12, max_size=12)


@settings(max_examples=25)
@given(n=dims, p=st.sampled_from([2.0, 3.0, 4.0]), values=tuples)
def test_a_matrix_is_elliptic_against_phi(n, p, values):
    c = build_cost(n, p)
    x, y, tx, ty = np.asarray(values[: 4 * n]).reshape(4, n)
    a = a_matrix(c, x, y, tx, ty).value
    weight = phi(c, x, y, tx, ty).value
    ext = c.extremes
    slack = 1e-6 * (1 + ext.Lam * weight)
    eigenvalues = np.linalg.eigvalsh(a)
    assert eigenvalues.min() >= ext.lam * weight - slack
    assert eigenvalues.max() <= ext.Lam * weight + slack


@settings(max_examples=25)
@given(n=dims, p=st.sampled_from([2.0, 3.0, 4.0]), values=tuples)
def test_a_matrix_is_symmetric_in_the_pair(n, p, values):
    c = build_cost(n, p)
    x, y, tx, ty = np.asarray(values[: 4 * n]).reshape(4, n)
    forward = a_matrix(c, x, y, tx, ty).value
    backward = a_matrix(c, y, x, ty, tx).value
    assert np.allclose(forward, forward.T, atol=1e-12)
    assert np.abs(forward - backward).max() < 1e-7 * (1 + np.abs(forward).max())
