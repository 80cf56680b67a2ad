"""End-to-end acceptance checks on the fixed-seed demo configuration.

The demo suites run once per session (timed per suite); every criterion
test reads from that run and appends one pass/fail line to the terminal
summary.
"""
import math
import time

import pytest

from ouschauder.harness.config import demo_config
from ouschauder.harness.report import to_json
from ouschauder.harness.suites import (ANCHORS, CLOSED_FORM_TOLERANCE, FD_TOLERANCE, RESOLVENT_IDENTITY_TOLERANCE,
                                       SUITE_ORDER, SUITES, SuiteContext, run_suites)

from conftest import ACCEPTANCE_LINES

pytestmark = pytest.mark.slow

# the gradient Holder bound from the sup norm with the extra time decay factor
TIME_DECAY_FORM = "gradient_holder_from_sup"

SMOOTHING_IDS = (
    "semigroup_sup_contraction", "gradient_bound_bounded", "hessian_bound_bounded", "third_bound_bounded",
    "gradient_bound_c1", "hessian_bound_c1", "third_bound_c1", "holder_seminorm_decay",
    "gradient_holder_from_holder", TIME_DECAY_FORM, "gradient_from_holder", "hessian_from_holder",
    "third_from_holder",
)


class DemoRun:
    def __init__(self):
        self.cfg = demo_config()
        self.ctx = SuiteContext(self.cfg)
        self.reports, self.seconds = {}, {}
        for name in SUITE_ORDER:
            start = time.perf_counter()
            self.reports[name] = SUITES[name](self.ctx)
            self.seconds[name] = time.perf_counter() - start

    def all(self):
        return [r for name in SUITE_ORDER for r in self.reports[name]]

    def by_id(self, *idents):
        return [r for r in self.all() if r.inequality_id in idents]


@pytest.fixture(scope="session")
def demo():
    return DemoRun()


def report_line(number, records, extra=""):
    counted = [r for r in records if r.counted]
    bad = [r for r in counted if not r.passed]
    ratios = [r.ratio for r in counted if math.isfinite(r.ratio)]
    worst = max(ratios) if ratios else float("nan")
    status = "PASS" if counted and not bad else "FAIL"
    ACCEPTANCE_LINES.append((number, status, f"{len(counted)} checks, {len(bad)} failed, max ratio {worst:.4g}"
                                             + (f", {extra}" if extra else "")))
    return bad


def test_demo_covers_every_inequality(demo):
    assert {r.inequality_id for r in demo.all()} == set(ANCHORS)


def test_criterion_1_formula_validation(demo):
    recs = demo.reports["formulas"]
    secs = demo.seconds["formulas"]
    bad = report_line(1, recs, f"{secs:.1f} s")
    ids = {r.inequality_id for r in recs}
    assert ids == {"gradient_formula_fd", "hessian_formula_fd", "third_formula_fd",
                   "gradient_formula_c1_fd", "hessian_formula_c1_fd", "third_formula_c1_fd"}
    for r in recs:
        order = {"gradient": 1, "hessian": 2, "third": 3}[r.inequality_id.split("_")[0]]
        assert r.rhs == FD_TOLERANCE[order]
    assert not bad
    assert secs <= 60


def test_criterion_2_closed_forms(demo):
    recs = demo.reports["closed_forms"]
    secs = demo.seconds["closed_forms"]
    bad = report_line(2, recs, f"{secs:.1f} s")
    assert all(r.rhs == CLOSED_FORM_TOLERANCE and r.slack_add == 0 for r in recs)
    assert len({r.inequality_id for r in recs}) == 8
    assert not bad
    assert secs <= 10


def test_criterion_3_smoothing_grid(demo):
    cfg = demo.cfg
    recs = demo.by_id(*SMOOTHING_IDS)
    fields = {r.case["field"] for r in recs}
    assert len(cfg.alphas) >= 3 and len(cfg.t_grid) >= 10 and cfg.design_points >= 64 and len(fields) >= 5
    assert cfg.slack == 1e-3 and cfg.error_multiple == 3.0
    strict_form = [r for r in recs if r.inequality_id == TIME_DECAY_FORM]
    decay_failures = [r for r in strict_form if not r.passed]
    report_line(3, recs, f"{len(decay_failures)} failure(s) in the time-decaying sup-norm form of the "
                         "gradient Holder bound")
    others = [r for r in recs if r.inequality_id != TIME_DECAY_FORM]
    assert not [r for r in others if not r.passed]


def test_criterion_3_proved_gradient_holder_form(demo):
    recs = demo.by_id("gradient_holder_from_sup_proved")
    assert recs and all(r.passed for r in recs)


@pytest.mark.xfail(strict=True, reason="time-decaying form of the bound is violated on the demo grid; "
                                       "recorded in the decision ledger")
def test_criterion_3_time_decaying_gradient_holder_form(demo):
    recs = demo.by_id(TIME_DECAY_FORM)
    assert recs
    assert all(r.passed for r in recs)


def test_criterion_3_counterexample_exceeds_time_decaying_bound(demo):
    (rec,) = demo.by_id("gradient_holder_from_sup_counterexample")
    assert rec.lhs > rec.rhs + 3 * rec.err_est


def test_criterion_4_schauder(demo):
    recs = demo.reports["schauder"]
    secs = demo.seconds["schauder"]
    bad = report_line(4, recs, f"{secs:.1f} s")
    cfg = demo.cfg
    hol = {(r.case["field"], r.case["alpha"], r.case["lambda"]) for r in recs
           if r.inequality_id == "schauder_hessian_holder"}
    assert {a for _, a, _ in hol} == set(cfg.alphas) and {lam for _, _, lam in hol} == set(cfg.lambdas)
    for ident in ("schauder_gradient", "schauder_hessian", "schauder_hessian_holder",
                  "schauder_split_short", "schauder_split_long"):
        assert any(r.inequality_id == ident for r in recs)
    assert not bad
    assert secs <= 180


def test_criterion_5_zygmund(demo):
    recs = demo.by_id("zygmund_gradient")
    bad = report_line(5, recs)
    assert {r.case["lambda"] for r in recs} == {0.5, 1.0, 2.0}
    bounded = {e.name for e in demo.ctx.bounded()}
    assert {r.case["field"] for r in recs} == bounded
    assert all(r.error_multiple == 0 or r.slack_add >= 0 for r in recs)
    assert not bad


def test_criterion_6_degeneracy(demo):
    recs = demo.reports["degeneracy"]
    bad = report_line(6, recs)
    (rough,) = [r for r in recs if r.inequality_id == "kernel_direction_roughness"]
    assert rough.check == "lower" and rough.rhs == 10.0 and rough.lhs >= 10.0
    range_side = [r for r in recs if r.inequality_id != "kernel_direction_roughness"]
    assert range_side and all(r.passed for r in range_side)
    assert not bad


def test_criterion_7_identities(demo):
    recs = demo.reports["identities"]
    bad = report_line(7, recs)
    assert all(r.rhs == RESOLVENT_IDENTITY_TOLERANCE for r in recs if r.inequality_id == "resolvent_identity")
    assert {r.inequality_id for r in recs} == {"semigroup_law", "resolvent_identity"}
    assert not bad


def test_criterion_8_interpolation(demo):
    recs = demo.by_id("interpolation_multiplicative", "interpolation_k_functional")
    bad = report_line(8, recs)
    assert {r.inequality_id for r in recs} == {"interpolation_multiplicative", "interpolation_k_functional"}
    lams = {r.case["lambda"] for r in recs if r.inequality_id == "interpolation_multiplicative"}
    assert lams == set(demo.cfg.lambdas)
    assert not bad


def test_criterion_9_determinism(demo):
    first = to_json(demo.all()).encode()
    second = to_json(run_suites(demo_config())).encode()
    same = first == second
    ACCEPTANCE_LINES.append((9, "PASS" if same else "FAIL", f"{len(first)} JSON bytes compared"))
    assert same
