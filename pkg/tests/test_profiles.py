import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from ouschauder.profiles import AbsClipPow, GaussBump, Sine, sine_holder_factor


def dense_holder(phi, beta, lo=-6.0, hi=6.0, n=3001):
    """Brute-force max of |phi(a)-phi(b)|/|a-b|^beta over a grid of pairs."""
    s = np.linspace(lo, hi, n)
    v = phi(s)
    best = 0.0
    for k in range(1, n, 3):
        d = s[k] - s[0]
        best = max(best, float(np.max(np.abs(v[k:] - v[:-k])) / d ** beta))
    return best


@pytest.mark.parametrize("profile", [AbsClipPow(0.5), AbsClipPow(1.0, clip=2.0, amplitude=-0.5),
                                     Sine(2.0, 0.7), GaussBump(1.0, 0), GaussBump(0.5, 2)])
@pytest.mark.parametrize("beta", [0.3, 0.5])
def test_holder_constant_bounds_dense_search(profile, beta):
    exact = profile.holder(beta)
    dense = dense_holder(profile, beta)
    assert dense <= exact * (1 + 1e-9)
    assert dense >= exact * 0.98


def test_abs_clip_pow_not_smoother_than_power():
    assert AbsClipPow(0.5).holder(0.7) == math.inf
    with pytest.raises(ValueError):
        AbsClipPow(1.5)


@given(st.floats(0.05, 0.95))
def test_sine_factor_is_maximum(beta):
    c = sine_holder_factor(beta)
    d = np.geomspace(1e-4, 2 * math.pi, 4000)
    q = 2 * np.abs(np.sin(d / 2)) / d ** beta
    assert q.max() <= c * (1 + 1e-9)
    assert q.max() >= c * (1 - 1e-4)


def test_sup_norms():
    assert math.isclose(GaussBump(2.0, 0).sup, 2.0)
    assert math.isclose(GaussBump(1.0, 1).sup, math.exp(-0.5), rel_tol=1e-10)
    assert AbsClipPow(0.5, clip=4.0, amplitude=3.0).sup == 6.0


def test_derivatives():
    s = np.linspace(-3, 3, 11)
    h = 1e-6
    for p in (Sine(1.5, 2.0, 0.3), GaussBump(1.0, 1)):
        fd = (p(s + h) - p(s - h)) / (2 * h)
        assert np.allclose(p.derivative()(s), fd, atol=1e-8)
