import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from ouschauder.errors import MissingMetadata
from ouschauder.fields import ConstantField, make_linear, make_quadratic, make_ridge
from ouschauder.gaussian import c_factor
from ouschauder.profiles import AbsClipPow, GaussBump, Sine
from ouschauder.quadrature import QuadratureSpec
from ouschauder.semigroup import (apply_T, semigroup_hess_c2, semigroup_jet, semigroup_jet_c1,
                                  semigroup_profile)

POINTS = np.array([[0.0, 0.0, 0.0], [0.3, -0.7, 1.1], [1.5, 0.4, -2.0]])


def sine_closed_form(model, z, t, x):
    """T(t) sin(<z,.>) = exp(-b^2/2) sin(e^{-t}<z,x>), b^2 = (1-e^{-2t}) <Qz,z>."""
    w = model.h_pairing(z)
    b2 = (1 - math.exp(-2 * t)) * float(w @ w)
    a = math.exp(-t) * (x @ z)
    damp = math.exp(-b2 / 2)
    val = damp * np.sin(a)
    grad = (damp * math.exp(-t) * np.cos(a))[:, None] * w
    hess = (-damp * math.exp(-2 * t) * np.sin(a))[:, None, None] * np.outer(w, w)
    return val, grad, hess


@pytest.mark.parametrize("ridge", [True, False])
@pytest.mark.parametrize("t", [0.05, 1.0, 3.0])
def test_sine_ridge_closed_form(degenerate_model, ridge, t):
    z = np.array([0.5, -1.0, 2.0])
    f = make_ridge(degenerate_model, z, Sine())
    spec = QuadratureSpec(ridge_reduction=ridge)
    jet = semigroup_jet(degenerate_model, f, t, POINTS, 2, spec)
    val, grad, hess = sine_closed_form(degenerate_model, z, t, POINTS)
    assert np.allclose(jet.value, val, atol=1e-10)
    assert np.allclose(jet.grad, grad, atol=1e-9)
    assert np.allclose(jet.hess, hess, atol=1e-8)


def test_linear_and_quadratic_closed_forms(degenerate_model):
    m = degenerate_model
    a = np.array([1.0, 2.0, 3.0])
    t = 0.7
    lin = semigroup_jet(m, make_linear(m, a), t, POINTS, 2)
    assert np.allclose(lin.value, math.exp(-t) * POINTS @ a, atol=1e-12)
    assert np.allclose(lin.grad, math.exp(-t) * m.h_pairing(a), atol=1e-12)
    assert np.allclose(lin.hess, 0.0, atol=1e-12)
    quad = semigroup_jet(m, make_quadratic(m, a), t, POINTS, 2)
    qa = float(m.h_pairing(a) @ m.h_pairing(a))
    want = math.exp(-2 * t) * (POINTS @ a) ** 2 + (1 - math.exp(-2 * t)) * qa
    assert np.allclose(quad.value, want, atol=1e-10)
    assert np.allclose(quad.hess, 2 * math.exp(-2 * t) * np.outer(m.h_pairing(a), m.h_pairing(a)), atol=1e-9)


def test_constant_is_fixed(degenerate_model):
    jet = semigroup_jet(degenerate_model, ConstantField(degenerate_model, 2.5), 1.0, POINTS, 3)
    assert np.all(jet.value == 2.5) and not np.any(jet.d3)


def fd_levels(model, f, t, x, order, step):
    """Central differences of the level below along whitened directions."""
    r = model.rank
    E = model.to_ambient(np.eye(r))
    out = []
    for i in range(r):
        plus = semigroup_jet(model, f, t, x + step * E[i], order - 1).level(order - 1)
        minus = semigroup_jet(model, f, t, x - step * E[i], order - 1).level(order - 1)
        out.append((plus - minus) / (2 * step))
    return np.stack(out, axis=-1)


@pytest.mark.parametrize("order, step, rel", [(1, 1e-4, 1e-5), (2, 1e-4, 1e-4), (3, 1e-3, 1e-3)])
@pytest.mark.parametrize("profile", [AbsClipPow(0.5), GaussBump(1.0, 0)], ids=repr)
def test_derivatives_match_finite_differences(degenerate_model, order, step, rel, profile):
    m = degenerate_model
    f = make_ridge(m, np.array([1.0, 1.0, 0.5]), profile)
    x = np.array([[0.0, 0.0, 0.0], [0.4, -0.2, 0.9]])
    t = 0.5
    formula = semigroup_jet(m, f, t, x, order).level(order)
    fd = fd_levels(m, f, t, x, order, step)
    scale = np.abs(formula).max()
    assert np.abs(formula - fd).max() <= rel * scale


def test_c1_representation_matches_bounded_one(degenerate_model):
    m = degenerate_model
    f = make_ridge(m, np.array([1.0, -0.5, 0.0]), Sine(2.0))
    a = semigroup_jet(m, f, 1.0, POINTS, 3)
    b = semigroup_jet_c1(m, f, 1.0, POINTS, 3)
    for k in (1, 2, 3):
        assert np.allclose(a.level(k), b.level(k), atol=1e-6)
    generic = semigroup_jet_c1(m, f, 1.0, POINTS, 3, QuadratureSpec(ridge_reduction=False))
    for k in (1, 2, 3):
        assert np.allclose(generic.level(k), b.level(k), atol=1e-6)


def test_c1_gradient_at_time_zero(degenerate_model):
    m = degenerate_model
    f = make_ridge(m, np.array([1.0, 0.0, 0.0]), Sine())
    g = semigroup_jet_c1(m, f, 0.0, POINTS, 1).grad
    assert np.allclose(g, f.h_gradient(POINTS))
    with pytest.raises(ValueError):
        semigroup_jet_c1(m, f, 0.0, POINTS, 2)


def test_c2_hessian_representation(degenerate_model):
    m = degenerate_model
    f = make_ridge(m, np.array([0.3, 1.0, 0.0]), Sine())
    h, _ = semigroup_hess_c2(m, f, 0.8, POINTS)
    assert np.allclose(h, semigroup_jet(m, f, 0.8, POINTS, 2).hess, atol=1e-9)


def test_missing_gradient_metadata(degenerate_model):
    f = make_ridge(degenerate_model, np.array([1.0, 0.0, 0.0]), AbsClipPow(0.5))
    with pytest.raises(MissingMetadata):
        semigroup_jet_c1(degenerate_model, f, 1.0, POINTS, 1)


def test_time_zero_rules(degenerate_model):
    f = make_ridge(degenerate_model, np.array([1.0, 0.0, 0.0]), AbsClipPow(0.5))
    assert np.allclose(semigroup_jet(degenerate_model, f, 0.0, POINTS).value, f(POINTS))
    with pytest.raises(ValueError):
        semigroup_jet(degenerate_model, f, 0.0, POINTS, 1)
    with pytest.raises(ValueError):
        semigroup_jet(degenerate_model, f, -1.0, POINTS)


@given(st.floats(0.05, 2.0), st.floats(0.05, 2.0))
def test_semigroup_law(degenerate_model, s, t):
    m = degenerate_model
    f = make_ridge(m, np.array([1.0, 1.0, 0.0]), AbsClipPow(0.5))
    inner = make_ridge(m, f.z, semigroup_profile(f, s))
    lhs = semigroup_jet(m, inner, t, POINTS).value
    rhs = semigroup_jet(m, f, s + t, POINTS).value
    assert np.allclose(lhs, rhs, atol=1e-8)


@given(st.floats(-4, 4), st.floats(1e-3, 10.0))
def test_contraction_and_gradient_bound(degenerate_model, s, t):
    m = degenerate_model
    f = make_ridge(m, np.array([1.0, 0.0, 0.0]), GaussBump(1.0, 1))
    x = np.array([[s / 2.0, 0.0, 0.0]])
    jet = semigroup_jet(m, f, t, x, 1)
    assert abs(jet.value[0]) <= f.sup_norm + 1e-12
    assert np.linalg.norm(jet.grad[0]) <= float(c_factor(t)) * f.sup_norm * (1 + 1e-9)


def test_kernel_direction_is_invisible(degenerate_model):
    m = degenerate_model
    f = make_ridge(m, np.array([0.0, 0.0, 1.0]), Sine())
    jet = semigroup_jet(m, f, 1.0, POINTS, 2)
    # the kernel coordinate is transported deterministically: T(t)f(x) = sin(e^{-t} x_3)
    assert np.allclose(jet.value, np.sin(math.exp(-1.0) * POINTS[:, 2]), atol=1e-12)
    assert not np.any(jet.grad) and not np.any(jet.hess)
    assert math.isclose(apply_T(m, f, 1.0, POINTS[1]), math.sin(math.exp(-1.0) * 1.1), abs_tol=1e-12)
