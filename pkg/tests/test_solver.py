import math
from dataclasses import replace

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import integrate

from ouschauder.errors import MissingMetadata
from ouschauder.fields import ConstantField, constant_in_time, make_linear, make_quadratic, make_ridge
from ouschauder.profiles import AbsClipPow, GaussBump, Sine
from ouschauder.solver import (TimeQuadrature, mild_jet, mild_solution, resolvent, resolvent_grad,
                               resolvent_jet, resolvent_window_jet)

X = np.array([[0.0, 0.0, 0.0], [0.3, -0.7, 1.1], [1.5, 0.4, -2.0]])


def test_resolvent_of_polynomials(degenerate_model):
    m = degenerate_model
    lam = 1.5
    assert np.allclose(resolvent(m, ConstantField(m, 2.0), lam, X), 2.0 / lam, atol=1e-10)
    a = np.array([1.0, 2.0, 3.0])
    assert np.allclose(resolvent(m, make_linear(m, a), lam, X), X @ a / (lam + 1), atol=1e-9)
    g = resolvent_grad(m, make_linear(m, np.array([2.0, 0.0, 0.0])), lam, X[0])
    assert np.allclose(g.z, np.array([4.0, 0.0]) / (lam + 1), atol=1e-10)
    assert np.allclose(g.h, np.array([8.0, 0.0, 0.0]) / (lam + 1), atol=1e-10)
    # <a,x>^2 relaxes to |Q^{1/2}a|^2 at rate 2
    q = float(m.h_pairing(a) @ m.h_pairing(a))
    want = (X @ a) ** 2 / (lam + 2) + q * (1 / lam - 1 / (lam + 2))
    jet = resolvent_jet(m, make_quadratic(m, a), lam, X, 2)
    assert np.allclose(jet.value, want, rtol=1e-9)
    assert np.allclose(jet.hess, 2 * np.outer(m.h_pairing(a), m.h_pairing(a)) / (lam + 2), rtol=1e-8)


@pytest.mark.parametrize("lam", [0.5, 2.0])
def test_resolvent_matches_laplace_transform(degenerate_model, lam):
    m = degenerate_model
    z = np.array([1.0, 0.5, 0.0])
    f = make_ridge(m, z, Sine())
    b2 = float(m.h_pairing(z) @ m.h_pairing(z))
    for x in X:
        s = x @ z
        ref, _ = integrate.quad(lambda t: math.exp(-lam * t - (1 - math.exp(-2 * t)) * b2 / 2)
                                * math.sin(math.exp(-t) * s), 0, np.inf, epsabs=1e-13, limit=200)
        jet = resolvent_jet(m, f, lam, x[None], 0)
        assert abs(jet.value[0] - ref) < 1e-9
        assert jet.err[0, 0] < 1e-7


def fd(m, fun, x, step):
    E = m.to_ambient(np.eye(m.rank))
    return np.stack([(fun(x + step * E[i]) - fun(x - step * E[i])) / (2 * step) for i in range(m.rank)], -1)


def test_resolvent_derivatives_match_finite_differences(degenerate_model):
    m = degenerate_model
    f = make_ridge(m, np.array([1.0, 1.0, 0.0]), AbsClipPow(0.5))
    x = X[:2]
    jet = resolvent_jet(m, f, 1.0, x, 2)
    g = fd(m, lambda p: resolvent_jet(m, f, 1.0, p, 0).value, x, 1e-4)
    assert np.abs(jet.grad - g).max() <= 1e-4 * np.abs(jet.grad).max()
    # the Hessian is only 1/2-Holder on the ridge's singular level set, so
    # the difference check for it uses points away from <z, x> = 0
    x = X[1:]
    jet = resolvent_jet(m, f, 1.0, x, 2)
    h = fd(m, lambda p: resolvent_jet(m, f, 1.0, p, 1).grad, x, 1e-4)
    assert np.abs(jet.hess - h).max() <= 1e-3 * np.abs(jet.hess).max()


def test_hessian_refused_without_holder_data(degenerate_model):
    m = degenerate_model
    f = make_ridge(m, np.array([1.0, 0.0, 0.0]), AbsClipPow(0.5))
    f.regularity = 0.0
    with pytest.raises(MissingMetadata):
        resolvent_jet(m, f, 1.0, X, 2)


def test_refining_the_split_stays_within_error_estimate(degenerate_model):
    m = degenerate_model
    f = make_ridge(m, np.array([1.0, 1.0, 0.0]), AbsClipPow(0.5))
    tq = TimeQuadrature()
    a = resolvent_jet(m, f, 1.0, X, 2, tq)
    b = resolvent_jet(m, f, 1.0, X, 2, replace(tq, split=tq.split / 2))
    for k in range(3):
        diff = np.abs(a.level(k) - b.level(k)).reshape(len(X), -1).max(axis=1)
        assert np.all(diff <= a.err[:, k] + b.err[:, k])


@pytest.mark.parametrize("lam", [0.5, 1.0, 3.0])
def test_kernel_ridge_resolvent_with_kinks(degenerate_model, lam):
    m = degenerate_model
    f = make_ridge(m, np.array([0.0, 0.0, 1.0]), AbsClipPow(0.5, clip=0.8))
    for s in (0.3, 2.0, -5.0):
        x = np.array([[0.0, 0.0, s]])
        kink = [math.log(abs(s) / 0.8)] if abs(s) > 0.8 else []
        pieces = [0.0, *kink, 60.0]
        ref = sum(integrate.quad(lambda t: math.exp(-lam * t) * f.profile(math.exp(-t) * s), lo, hi,
                                 epsabs=1e-14, limit=200)[0] for lo, hi in zip(pieces[:-1], pieces[1:]))
        jet = resolvent_jet(m, f, lam, x, 1)
        assert abs(jet.value[0] - ref) < 1e-10
        assert not np.any(jet.grad) and jet.engine == "kernel-ridge"


@given(st.floats(-2, 2), st.floats(-2, 2))
def test_resolvent_is_linear(degenerate_model, a, b):
    m = degenerate_model
    f = make_ridge(m, np.array([1.0, 0.0, 0.0]), Sine())
    g = make_ridge(m, np.array([0.0, 1.0, 0.0]), GaussBump())
    fa = make_ridge(m, f.z, Sine(1.0, a))
    gb = make_ridge(m, g.z, GaussBump(b))
    lhs = resolvent(m, fa, 1.0, X) + resolvent(m, gb, 1.0, X)
    rhs = a * resolvent(m, f, 1.0, X) + b * resolvent(m, g, 1.0, X)
    assert np.allclose(lhs, rhs, atol=1e-10)


def test_resolvent_window_adds_up(degenerate_model):
    m = degenerate_model
    f = make_ridge(m, np.array([1.0, 1.0, 0.0]), AbsClipPow(0.5))
    full = resolvent_jet(m, f, 1.0, X, 1)
    # the tail beyond t = 60 is below e^{-60}
    parts = [resolvent_window_jet(m, f, 1.0, X, 1, lo, hi) for lo, hi in ((0.0, 0.5), (0.5, 60.0))]
    assert np.allclose(parts[0].grad + parts[1].grad, full.grad, atol=1e-8)


def test_mild_solution_examples(degenerate_model):
    m = degenerate_model
    t = 1.3
    one = ConstantField(m, 1.0)
    f = make_ridge(m, np.array([1.0, 0.0, 0.0]), Sine())
    # homogeneous equation: v(t) = T(t) f
    hom = mild_jet(m, f, None, t, X, 1)
    assert np.allclose(hom.value, np.exp(-(1 - math.exp(-2 * t)) * 4 / 2) * np.sin(math.exp(-t) * X[:, 0]))
    # unit source: v(t) = t
    assert np.allclose(mild_solution(m, None, constant_in_time(one), t, X), t, atol=1e-12)
    # linear source: int_0^t e^{-s} ds <a, x>
    a = np.array([1.0, 2.0, -1.0])
    got = mild_solution(m, None, constant_in_time(make_linear(m, a)), t, X)
    assert np.allclose(got, (1 - math.exp(-t)) * X @ a, atol=1e-11)


def test_mild_at_time_zero_returns_datum(degenerate_model):
    m = degenerate_model
    f = make_ridge(m, np.array([1.0, 0.5, 0.0]), Sine())
    jet = mild_jet(m, f, constant_in_time(f), 0.0, X, 2)
    assert np.allclose(jet.value, f(X)) and np.allclose(jet.hess, f.h_hessian(X))


def test_mild_kernel_source_path(degenerate_model):
    m = degenerate_model
    f = make_ridge(m, np.array([0.0, 0.0, 1.0]), AbsClipPow(1.0, clip=1.0))
    t, s = 2.0, 3.0
    got = mild_solution(m, None, constant_in_time(f), t, np.array([0.0, 0.0, s]))
    ref = integrate.quad(lambda u: min(abs(math.exp(-u) * s), 1.0), 0, t, points=[math.log(s)], epsabs=1e-14)[0]
    assert abs(got - ref) < 1e-12
