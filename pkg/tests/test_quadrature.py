import math

import numpy as np
import pytest

from ouschauder.errors import SpecInvalid
from ouschauder.quadrature import (QuadratureSpec, gauss_legendre01, gaussian_nodes, hermite_e, kronrod15,
                                   substream, tanh_sinh01)


def test_kronrod_integrates_polynomials():
    x, wk, wg = kronrod15()
    assert math.isclose(wk.sum(), 1.0, rel_tol=1e-14)
    assert math.isclose(wg.sum(), 1.0, rel_tol=1e-14)
    # Kronrod exact to degree 22, embedded Gauss to degree 13
    assert math.isclose(wk @ x ** 22, 1 / 23, rel_tol=1e-13)
    assert math.isclose(wg @ x ** 13, 1 / 14, rel_tol=1e-13)
    assert np.count_nonzero(wg) == 7


def test_gauss_legendre_unit_interval():
    x, w = gauss_legendre01(10)
    assert np.all((x > 0) & (x < 1))
    assert math.isclose(w @ x ** 19, 1 / 20, rel_tol=1e-13)


def test_tanh_sinh_handles_endpoint_singularity():
    frac, w = tanh_sinh01(1 / 6)
    assert np.all((frac > 0) & (frac < 1))
    # truncation at |t| = 3 limits a 1/sqrt endpoint to about 1e-7
    assert abs(w @ frac ** -0.5 - 2.0) < 1e-7
    assert abs(w @ np.log(frac) + 1.0) < 1e-9


def test_hermite_moments():
    x, w = hermite_e(20)
    assert math.isclose(w.sum(), 1.0, rel_tol=1e-13)
    assert math.isclose(w @ x ** 4, 3.0, rel_tol=1e-12)
    assert math.isclose(w @ x ** 6, 15.0, rel_tol=1e-12)


@pytest.mark.parametrize("kwargs", [dict(gh_order=1), dict(qmc_log2=2), dict(ridge_half_width=2.0),
                                    dict(ridge_ts_step=0.0)])
def test_invalid_spec(kwargs):
    with pytest.raises(SpecInvalid):
        QuadratureSpec(**kwargs)


def test_nodes_are_reproducible_and_tag_dependent():
    spec = QuadratureSpec(gh_max_dims=0, qmc_log2=8)
    a, wa, ea = gaussian_nodes(3, spec, "one")
    b, _, _ = gaussian_nodes(3, spec, "one")
    c, _, _ = gaussian_nodes(3, spec, "two")
    assert ea == "sobol" and np.array_equal(a, b) and not np.array_equal(a, c)
    assert math.isclose(wa.sum(), 1.0)
    assert substream(1, "x").generate_state(2).tolist() == substream(1, "x").generate_state(2).tolist()


def test_tensor_rule_and_point_mass():
    nodes, w, engine = gaussian_nodes(2, QuadratureSpec(gh_order=12))
    assert engine == "gauss-hermite" and nodes.shape[1] == 2
    assert math.isclose(w @ (nodes[:, 0] ** 2 * nodes[:, 1] ** 2), 1.0, rel_tol=1e-12)
    nodes, w, engine = gaussian_nodes(0, QuadratureSpec())
    assert engine == "point" and nodes.shape == (1, 0)
