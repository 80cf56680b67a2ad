import math

import numpy as np
import pytest

from ouschauder.fields import make_ridge
from ouschauder.harness.config import parse_config
from ouschauder.harness.suites import (ANCHORS, SUITE_ORDER, SUITES, SuiteContext, k_functional_upper,
                                       ridge_scan, run_suites, tabulated_profile)
from ouschauder.profiles import AbsClipPow
from ouschauder.semigroup import semigroup_profile

from conftest import SMALL_CONFIG

CONSTANT_ONLY = SMALL_CONFIG.split("[corpus.1]")[0] + """\
[corpus.1]
kind = constant
name = constant
value = -1.5
""" + "[suite]" + SMALL_CONFIG.split("[suite]")[1].replace("parabolic_pairs = 2:1\n", "")


def test_anchor_table_is_consistent():
    assert set(SUITES) == set(SUITE_ORDER)
    assert {suite for suite, _ in ANCHORS.values()} == set(SUITE_ORDER)
    anchors = [a for _, a in ANCHORS.values()]
    assert len(set(anchors)) == len(anchors)


@pytest.fixture(scope="module")
def small_reports(small_config):
    return run_suites(small_config)


def test_small_run_covers_every_anchor(small_reports):
    assert {r.inequality_id for r in small_reports} == set(ANCHORS)


def test_small_run_records_are_well_formed(small_reports):
    for r in small_reports:
        assert r.suite == ANCHORS[r.inequality_id][0]
        assert math.isfinite(r.rhs) or r.check in ("finite", "info")
        assert r.err_est >= 0 and r.ms == 0.0


def test_small_run_outcomes(small_reports):
    bad = {r.inequality_id for r in small_reports if r.counted and not r.passed}
    # the only inequality allowed to fail is the time-decaying form of the
    # gradient Holder bound from the sup norm (see the acceptance tests)
    assert bad <= {"gradient_holder_from_sup"}
    counter = [r for r in small_reports if r.inequality_id == "gradient_holder_from_sup_counterexample"]
    assert len(counter) == 1 and counter[0].ratio > 1


def test_constant_data_give_zero_left_sides():
    cfg = parse_config(CONSTANT_ONLY)
    reports = run_suites(cfg, ["smoothing", "schauder", "zygmund", "interpolation"])
    assert reports and all(r.passed for r in reports)
    derivative_ids = [r for r in reports if r.inequality_id not in
                      ("semigroup_sup_contraction", "resolvent_sup_bound", "resolvent_sup_unscaled")]
    assert derivative_ids and all(abs(r.lhs) < 1e-12 for r in derivative_ids)


def test_k_functional_refinement_is_monotone(small_config):
    ctx = SuiteContext(small_config)
    f = ctx.corpus[0].field
    scales = np.array([1.0, 0.1, 0.01])
    coarse, _ = k_functional_upper(ctx, f, scales, np.geomspace(1e-4, 10, 6))
    fine, _ = k_functional_upper(ctx, f, scales, np.geomspace(1e-4, 10, 21))
    assert np.all(fine <= coarse)


def test_ridge_scan_hits_levels(degenerate_model):
    f = make_ridge(degenerate_model, np.array([1.0, 2.0, 0.0]), AbsClipPow(0.5, clip=0.3))
    pts = ridge_scan(f, 11, 2.0, 3.0)
    s = pts @ f.z
    assert np.isclose(s.max(), 6.0) and np.any(np.isclose(s, 0.9))


def test_tabulated_profile_accuracy(degenerate_model):
    f = make_ridge(degenerate_model, np.array([1.0, 0.0, 0.0]), AbsClipPow(0.5))
    exact = semigroup_profile(f, 0.05)
    table = tabulated_profile(exact, 6.0)
    r = np.linspace(-5.0, 5.0, 997)
    assert np.abs(table(r) - exact(r)).max() < 1e-6


def test_unknown_suite_name(small_config):
    with pytest.raises(KeyError):
        run_suites(small_config, ["nope"])
