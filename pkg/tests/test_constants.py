import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from ouschauder.gaussian import c0_constant, c1_constant
from ouschauder.harness.constants import (constants_table, derive_lemma_constants, interpolation_constant,
                                          schauder_gradient_constant, schauder_hessian_constant,
                                          schauder_holder_constant, zygmund_constant)


def test_first_constant_at_half():
    k = derive_lemma_constants(0.5)
    assert math.isclose(k.C1, (1 / math.sqrt(2)) / 1.5 + 1, rel_tol=1e-12)
    assert math.isclose(k.C1, 1.4714, rel_tol=1e-4)
    assert k.C1_numeric <= k.C1 * (1 + 1e-9)
    assert k.C1_numeric >= k.C1 * (1 - 1e-3)


@given(st.floats(0.05, 0.95))
def test_closed_reductions_agree_with_numeric_sups(alpha):
    k = derive_lemma_constants(alpha)
    c0 = c0_constant()
    closed = (c0 / (alpha + 1) + 1, 2 ** (1 - alpha / 2) * c0 * k.C1, 2 ** (1.5 - alpha / 2) * k.C1)
    for value, numeric, ref in zip((k.C1, k.C2, k.C3), (k.C1_numeric, k.C2_numeric, k.C3_numeric), closed):
        assert math.isclose(value, ref, rel_tol=1e-12)
        # the sup is approached as t -> 0 on the grid
        assert numeric <= ref * (1 + 1e-8) and numeric >= ref * (1 - 1e-3)


def test_limit_towards_one():
    assert math.isclose(derive_lemma_constants(1 - 1e-9).C1, c0_constant() / 2 + 1, rel_tol=1e-8)
    with pytest.raises(ValueError):
        derive_lemma_constants(1.0)


def test_monotone_in_lambda():
    lams = np.array([0.25, 0.5, 1.0, 2.0, 4.0])
    g = [schauder_gradient_constant(0.5, lam) for lam in lams]
    h = [schauder_hessian_constant(0.5, lam) for lam in lams]
    assert np.all(np.diff(g) < 0) and np.all(np.diff(h) < 0)
    assert schauder_holder_constant(0.5) > 0


def test_universal_constants():
    assert math.isclose(zygmund_constant(), 2 * c0_constant() + 2 * c1_constant(), rel_tol=1e-15)
    assert abs(zygmund_constant() - 4.66391) < 5e-6
    assert math.isclose(interpolation_constant(), math.sqrt(math.pi / 2), rel_tol=1e-15)
    assert abs(interpolation_constant() - 1.25331) < 5e-6


def test_table_layout():
    t = constants_table((0.5,), (1.0,))
    assert set(t) == {"k_p", "c0", "c1", "zygmund", "interpolation", "lemma"}
    assert t["lemma"][0]["gradient_bound"]["1"] == pytest.approx(schauder_gradient_constant(0.5, 1.0))
