import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from ouschauder.errors import MissingMetadata
from ouschauder.fields import (ConstantField, ProductField, constant_in_time, exact_holder, make_linear,
                               make_quadratic, make_ridge)
from ouschauder.profiles import AbsClipPow, GaussBump, Sine

coords = arrays(float, 3, elements=st.floats(-3, 3))


def h_directional_fd(model, f, x, i, step=1e-6):
    e = model.to_ambient(np.eye(model.rank)[i])
    return (f(x + step * e) - f(x - step * e)) / (2 * step)


@given(coords)
def test_ridge_h_gradient_matches_finite_difference(degenerate_model, x):
    f = make_ridge(degenerate_model, np.array([0.7, -1.2, 3.0]), Sine(1.3))
    g = f.h_gradient(x)
    for i in range(2):
        assert math.isclose(g[i], h_directional_fd(degenerate_model, f, x, i), abs_tol=1e-7)


def test_ridge_holder_scales_with_h_length(degenerate_model):
    f = make_ridge(degenerate_model, np.array([1.0, 0.0, 0.0]), AbsClipPow(0.5))
    assert math.isclose(f.sigma, 2.0)
    assert math.isclose(exact_holder(f, 0.5), 2.0 ** 0.5)
    assert exact_holder(f, 0.7) == math.inf
    assert math.isclose(f.holder_norm(0.3), 1.0 + 2.0 ** 0.3)
    with pytest.raises(ValueError):
        exact_holder(f, 1.0)


def test_kernel_ridge_is_flat_along_h(degenerate_model):
    f = make_ridge(degenerate_model, np.array([0.0, 0.0, 2.0]), AbsClipPow(0.5))
    assert f.sigma == 0.0 and f.exact_holder(0.5) == 0.0
    assert not np.any(f.h_gradient(np.ones((4, 3)))) and f.has_h_hessian


def test_missing_derivatives(degenerate_model):
    f = make_ridge(degenerate_model, np.array([1.0, 0.0, 0.0]), AbsClipPow(0.5))
    assert not f.has_h_gradient
    with pytest.raises(MissingMetadata):
        f.h_gradient(np.zeros(3))


def test_polynomial_fields(degenerate_model):
    m = degenerate_model
    a = np.array([1.0, -1.0, 5.0])
    lin, quad = make_linear(m, a), make_quadratic(m, a)
    x = np.array([[0.5, 1.0, 2.0]])
    assert not lin.bounded and lin(x)[0] == 9.5
    assert np.allclose(lin.h_gradient(x)[0], [2.0, -1.0])
    assert np.allclose(quad.h_hessian(x)[0], 2 * np.outer([2.0, -1.0], [2.0, -1.0]))


def test_product_and_constant(degenerate_model):
    m = degenerate_model
    a = make_ridge(m, np.array([1.0, 0.0, 0.0]), Sine())
    b = make_ridge(m, np.array([0.0, 1.0, 0.0]), GaussBump(2.0))
    p = ProductField(m, a, b)
    x = np.array([[0.3, -0.4, 0.0]])
    assert p.sup_norm == 2.0 and math.isclose(p(x)[0], a(x)[0] * b(x)[0])
    e = m.to_ambient(np.eye(2))
    fd = [(p(x + 1e-6 * e[i]) - p(x - 1e-6 * e[i]))[0] / 2e-6 for i in range(2)]
    assert np.allclose(p.h_gradient(x)[0], fd, atol=1e-7)
    c = ConstantField(m, -3.0)
    assert c.exact_holder(0.5) == 0.0 and c.holder_norm(0.5) == 3.0


def test_time_field(degenerate_model):
    f = make_ridge(degenerate_model, np.array([1.0, 0.0, 0.0]), Sine())
    g = constant_in_time(f)
    assert np.all(g.weight(np.array([0.0, 2.0])) == 1.0)
    assert math.isclose(g.uniform_holder_norm(0.5), f.holder_norm(0.5))
