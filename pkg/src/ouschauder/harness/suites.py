"""Verification suites.

Each suite takes a ``SuiteContext`` and returns a list of ``EstimateReport``
records in a deterministic order.  Suprema on the left-hand sides are taken
over finite point sets (design points plus, for ridge fields, a scan along
the ridge direction) and Holder/Zygmund seminorms over finite sample designs,
so every left-hand side is a lower bound of the true quantity while every
right-hand side is evaluated from exact metadata and derived constants.
"""
from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate, interpolate

from ..fields import ConstantField, RidgeField, ScalarField, TimeField, constant_in_time, make_ridge
from ..gaussian import c0_constant, c1_constant, c_factor, kp_constant
from ..profiles import AbsClipPow, CallableProfile, Sine
from ..semigroup import semigroup_jet, semigroup_jet_c1, semigroup_profile
from ..seminorms import (OP3_SAFETY, SampleDesign, default_design, difference_tables, op_norm2,
                         op_norm3, pair_error, target_norm)
from ..solver import mild_jet, resolvent_jet, resolvent_window_jet, ridge_resolvent_profile
from .config import CorpusEntry, SuiteConfig
from .constants import (derive_lemma_constants, interpolation_constant, schauder_gradient_constant,
                        schauder_hessian_constant, schauder_holder_constant, zygmund_constant)
from .report import EstimateReport

# inequality id -> (suite, anchor).  Anchors are the asserted formulas.
ANCHORS: dict[str, tuple[str, str]] = {
    # smoothing
    "semigroup_sup_contraction": ("smoothing", "sup|T(t)f| <= ||f||"),
    "gradient_bound_bounded": ("smoothing", "|grad_H T(t)f|_H <= c(t) ||f||"),
    "hessian_bound_bounded": ("smoothing", "||D2_H T(t)f|| <= 2 c(t)^2 ||f||"),
    "third_bound_bounded": ("smoothing", "||D3_H T(t)f|| <= (3 + k3^3) c(t)^3 ||f||"),
    "gradient_bound_c1": ("smoothing", "|grad_H T(t)f|_H <= ||grad_H f||"),
    "hessian_bound_c1": ("smoothing", "||D2_H T(t)f|| <= c(t) ||grad_H f||"),
    "third_bound_c1": ("smoothing", "||D3_H T(t)f|| <= 2 c(t)^2 ||grad_H f||"),
    "holder_seminorm_decay": ("smoothing", "[T(t)f]_a <= e^{-a t} [f]_a"),
    "gradient_holder_from_holder": ("smoothing", "[D_H T(t)f]_a <= e^{-a t} c(t) [f]_a"),
    "gradient_holder_from_sup": ("smoothing", "[D_H T(t)f]_a <= 2 e^{-a t} c(t)^{1+a} ||f||"),
    "gradient_holder_from_sup_proved": ("smoothing", "[D_H T(t)f]_a <= 2 c(t)^{1+a} ||f||"),
    "gradient_holder_from_sup_counterexample": (
        "smoothing", "quotient at a far pair vs 2 e^{-a t} c(t)^{1+a} ||f||"),
    "gradient_from_holder": ("smoothing", "|grad_H T(t)f|_H <= C1a t^{-(1-a)/2} ||f||_{C^a}"),
    "hessian_from_holder": ("smoothing", "||D2_H T(t)f|| <= C2a t^{-(1-a/2)} ||f||_{C^a}"),
    "third_from_holder": ("smoothing", "||D3_H T(t)f|| <= C3a t^{-(3/2-a/2)} ||f||_{C^a}"),
    # degeneracy
    "kernel_direction_roughness": ("degeneracy", "q(1e-4) / q(1e-1) >= 10 along ker Q"),
    "range_direction_gradient": ("degeneracy", "|grad_H T(1)f|_H <= c(1) ||f|| along range Q"),
    "range_direction_quotient": ("degeneracy", "q(1e-4) <= c(1) ||f|| ||k||_H along range Q"),
    # schauder
    "resolvent_sup_bound": ("schauder", "sup|R(l)f| <= ||f|| / l"),
    "resolvent_sup_unscaled": ("schauder", "sup|R(l)f| <= ||f||"),
    "schauder_gradient": ("schauder", "|grad_H u|_H <= C1a l^{-1/2-a/2} Gamma(1/2+a/2) ||f||_{C^a}"),
    "schauder_hessian": ("schauder", "||D2_H u|| <= C2a l^{-a/2} Gamma(a/2) ||f||_{C^a}"),
    "schauder_hessian_holder": ("schauder", "[D2_H u]_a <= (4 C2a/a + 2 C3a/(1-a)) ||f||_{C^a}"),
    "schauder_split_short": ("schauder", "[int_0^{|h|^2} e^{-lt} D2 T(t)f dt] <= 4 C2a/a ||f||_{C^a}"),
    "schauder_split_long": ("schauder", "[int_{|h|^2}^inf e^{-lt} D2 T(t)f dt] <= 2 C3a/(1-a) ||f||_{C^a}"),
    "resolvent_hessian_quadratic": ("schauder", "D2_H R(l)<a,x>^2 = 2 w w^T / (l + 2)"),
    # zygmund
    "zygmund_gradient": ("zygmund", "[grad_H u]_Z <= (2 c0 + 2 c1) ||f||"),
    "zygmund_split_short": ("zygmund", "|second difference of short-time part| <= 2 c0 ||f|| |h|"),
    "zygmund_split_short_proved": ("zygmund", "|second difference of short-time part| <= 8 c0 ||f|| |h|"),
    "zygmund_split_long": ("zygmund", "|second difference of long-time part| <= 2 c1 ||f|| |h|"),
    # interpolation
    "interpolation_k_functional": ("interpolation", "[u]_a <= 2 sup_s s^{-a} K(s, u)"),
    "interpolation_multiplicative": ("interpolation", "||grad_H u|| <= c0 sqrt(pi) ||u||^{1/2} ||Lu||^{1/2}"),
    "interpolation_multiplicative_proved": (
        "interpolation", "||grad_H u|| <= 2 c0 sqrt(pi) ||u||^{1/2} ||Lu||^{1/2}"),
    # parabolic
    "parabolic_c2alpha": ("parabolic", "||v||_{C^{2+a}} <= C(T) (||f||_{C^{2+a}} + ||g||_{C^a})"),
    "parabolic_quadratic_closed_form": ("parabolic", "D2_H v(1) = 2 e^{-2} w w^T for f = <a,x>^2, g = 0"),
    "parabolic_truncated_resolvent": ("parabolic", "v(t) = int_0^t T(s)g ds for f = 0, g constant in time"),
    "parabolic_initial_datum": ("parabolic", "v(0) = f, D2_H v(0) = D2_H f"),
    # formulas
    "gradient_formula_fd": ("formulas", "grad_H T(t)f = c(t) E[f(P) xi] vs differences of T(t)f"),
    "hessian_formula_fd": ("formulas", "D2_H T(t)f = c(t)^2 E[f(P)(xi xi - I)] vs differences of grad"),
    "third_formula_fd": ("formulas", "D3_H T(t)f = c(t)^3 E[f(P) He3(xi)] vs differences of D2"),
    "gradient_formula_c1_fd": ("formulas", "grad_H T(t)f = e^{-t} E[grad_H f(P)] vs differences of T(t)f"),
    "hessian_formula_c1_fd": ("formulas", "D2_H T(t)f = e^{-t} c(t) E[grad_H f(P) xi] vs differences of grad"),
    "third_formula_c1_fd": ("formulas", "D3_H T(t)f = e^{-t} c(t)^2 E[grad_H f(P)(xi xi - I)] vs differences of D2"),
    # closed forms
    "semigroup_linear_closed_form": ("closed_forms", "T(t)<a,x> = e^{-t} <a,x>"),
    "semigroup_quadratic_closed_form": ("closed_forms", "T(t)<a,x>^2 = e^{-2t}<a,x>^2 + (1-e^{-2t})|Q^{1/2}a|^2"),
    "resolvent_constant_closed_form": ("closed_forms", "R(l)c = c / l"),
    "resolvent_linear_closed_form": ("closed_forms", "R(l)<a,x> = <a,x> / (l + 1)"),
    "resolvent_quadratic_closed_form": (
        "closed_forms", "R(l)<a,x>^2 = <a,x>^2/(l+2) + |Q^{1/2}a|^2 (1/l - 1/(l+2))"),
    "mild_homogeneous_closed_form": ("closed_forms", "v(t) = e^{-t}<a,x> for f = <a,x>, g = 0"),
    "mild_unit_source_closed_form": ("closed_forms", "v(t) = t for f = 0, g = 1"),
    "mild_linear_source_closed_form": ("closed_forms", "v(t) = (1 - e^{-t}) <a,x> for f = 0, g = <a,x>"),
    # identities
    "semigroup_law": ("identities", "T(t+s)f = T(t)T(s)f"),
    "resolvent_identity": ("identities", "R(1)f - R(2)f = R(1)R(2)f"),
}

SUITE_ORDER = ("formulas", "closed_forms", "identities", "smoothing", "degeneracy",
               "schauder", "zygmund", "interpolation", "parabolic")

FD_STEPS = {1: 1e-4, 2: 1e-4, 3: 1e-3}
FD_TOLERANCE = {1: 1e-5, 2: 1e-4, 3: 1e-3}
CLOSED_FORM_TOLERANCE = 1e-8
RESOLVENT_IDENTITY_TOLERANCE = 1e-4
KERNEL_ROUGHNESS_FACTOR = 10.0
RIDGE_SCAN_HALF_WIDTH = 8.0
RESOLVENT_SCAN_HALF_WIDTH = 12.0
TAU_GRID = np.geomspace(1e-6, 20.0, 61)
MEAN_TIME = 60.0                     # T(60)f equals the Gaussian mean of f to rounding
SEMIGROUP_LAW_PAIRS = ((0.1, 0.4), (0.5, 1.0), (1.0, 2.0))


# ---------------------------------------------------------------------------
# context
# ---------------------------------------------------------------------------

@dataclass
class ResolventBundle:
    """R(lam)f on probe points and on the resolvent design (order 2)."""

    probe: np.ndarray
    value: np.ndarray
    grad: np.ndarray
    hess: np.ndarray
    err: np.ndarray
    tables: list            # [hess, hess err, grad, grad err] difference tables


@dataclass
class SuiteContext:
    cfg: SuiteConfig
    model: object = None
    corpus: list = field(default_factory=list)
    _designs: dict = field(default_factory=dict)
    _bundles: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.model is None:
            self.model = self.cfg.build_model()
        if not self.corpus:
            self.corpus = self.cfg.build_corpus(self.model)

    @property
    def spec(self):
        return self.cfg.quadrature

    @property
    def tq(self):
        return self.cfg.time_quadrature

    def design(self, kind: str) -> SampleDesign:
        if kind not in self._designs:
            c = self.cfg
            counts = {"smoothing": (c.design_points, c.design_directions),
                      "resolvent": (c.resolvent_points, c.resolvent_directions),
                      "parabolic": (c.parabolic_points, c.parabolic_directions)}[kind]
            d = default_design(self.model, counts[0], counts[1], c.ladder_min, c.ladder_max, c.seed)
            self._designs[kind] = SampleDesign(d.points, d.directions, d.scales, d.seed, f"{kind}{list(d.shape)}")
        return self._designs[kind]

    def bounded(self) -> list[CorpusEntry]:
        return [e for e in self.corpus if e.field.bounded]

    def record(self, ident: str, lhs, rhs, err=0.0, case=None, witness=None, check="upper",
               ms=0.0, error_multiple=None) -> EstimateReport:
        suite, anchor = ANCHORS[ident]
        return EstimateReport(
            inequality_id=ident, anchor=anchor, lhs=float(lhs), rhs=float(rhs), err_est=float(err),
            slack_mult=self.cfg.slack,
            error_multiple=self.cfg.error_multiple if error_multiple is None else error_multiple,
            check=check, suite=suite, case=dict(case or {}), witness=dict(witness or {}),
            ms=float(ms) if self.cfg.timing else 0.0)

    def bundle(self, entry: CorpusEntry, lam: float) -> ResolventBundle:
        key = (entry.index, float(lam))
        if key not in self._bundles:
            f = entry.field
            probe = np.concatenate([self.design("resolvent").points,
                                    ridge_scan(f, self.cfg.line_points, RESOLVENT_SCAN_HALF_WIDTH, 1.0)])
            jet = resolvent_jet(self.model, f, lam, probe, 2, self.tq, self.spec)

            def levels(x):
                j = resolvent_jet(self.model, f, lam, x, 2, self.tq, self.spec)
                return [j.hess, j.err[:, 2], j.grad, j.err[:, 1]]

            tables = difference_tables(levels, self.design("resolvent"), self.model, second=True)
            self._bundles[key] = ResolventBundle(probe, jet.value, jet.grad, jet.hess, jet.err, tables)
        return self._bundles[key]


def ridge_scan(f: ScalarField, count: int, half_width: float, stretch: float) -> np.ndarray:
    """Points s z / |z|^2 with s / stretch on a uniform grid plus the profile breakpoints.

    Along these points <z, x> = s, so a ridge attains (up to grid resolution)
    every value its time-evolved profile takes.  Empty for non-ridge fields.
    """
    if not isinstance(f, RidgeField) or count <= 0:
        return np.zeros((0, f.model.dimension))
    a = np.linspace(-half_width, half_width, count)
    bps = [b for b in f.profile.breakpoints if abs(b) <= half_width]
    a = np.union1d(a, np.asarray(bps, dtype=float))
    s = stretch * a
    return s[:, None] * (f.z / float(f.z @ f.z))[None, :]


def _argmax_witness(values: np.ndarray, points: np.ndarray) -> tuple[int, dict]:
    i = int(np.argmax(values))
    return i, {"x": [float(v) for v in points[i]]}


def _clock():
    start = time.perf_counter()
    return lambda: 1e3 * (time.perf_counter() - start)


def _finite(v) -> bool:
    return v is not None and math.isfinite(v)


# ---------------------------------------------------------------------------
# smoothing
# ---------------------------------------------------------------------------

def run_smoothing_suite(ctx: SuiteContext) -> list[EstimateReport]:
    cfg, model, spec = ctx.cfg, ctx.model, ctx.spec
    design = ctx.design("smoothing")
    k3 = kp_constant(3.0)
    out: list[EstimateReport] = []
    for entry in ctx.bounded():
        f = entry.field
        for t in cfg.t_grid:
            clock = _clock()
            case = {"field": entry.name, "t": t}
            c = float(c_factor(t))
            pts = np.concatenate([design.points, ridge_scan(f, cfg.line_points, RIDGE_SCAN_HALF_WIDTH, math.exp(t))])
            jet = semigroup_jet(model, f, t, pts, 3, spec)
            norms = [np.abs(jet.value), target_norm(jet.grad), op_norm2(jet.hess), OP3_SAFETY * op_norm3(jet.d3)]
            errs = [jet.err[:, 0], jet.err[:, 1], jet.err[:, 2], OP3_SAFETY * jet.err[:, 3]]
            rhs = [f.sup_norm, c * f.sup_norm, 2 * c ** 2 * f.sup_norm, (3 + k3 ** 3) * c ** 3 * f.sup_norm]
            ids = ["semigroup_sup_contraction", "gradient_bound_bounded", "hessian_bound_bounded",
                   "third_bound_bounded"]
            pending = []
            for ident, v, e, r in zip(ids, norms, errs, rhs):
                i, w = _argmax_witness(v, pts)
                pending.append((ident, v[i], r, e[i], dict(case), w))

            if f.has_h_gradient and _finite(f.grad_sup):
                jc = semigroup_jet_c1(model, f, t, pts, 3, spec)
                g = f.grad_sup
                for ident, v, e, r in (
                        ("gradient_bound_c1", target_norm(jc.grad), jc.err[:, 1], g),
                        ("hessian_bound_c1", op_norm2(jc.hess), jc.err[:, 2], c * g),
                        ("third_bound_c1", OP3_SAFETY * op_norm3(jc.d3), OP3_SAFETY * jc.err[:, 3], 2 * c ** 2 * g)):
                    i, w = _argmax_witness(v, pts)
                    pending.append((ident, v[i], r, e[i], dict(case), w))

            def levels(x):
                j = semigroup_jet(model, f, t, x, 1, spec)
                return [j.value, j.grad, j.err[:, 0], j.err[:, 1]]

            val_tab, grad_tab, val_err, grad_err = difference_tables(levels, design, model)
            for alpha in cfg.alphas:
                acase = dict(case, alpha=alpha)
                hol = f.exact_holder(alpha)
                scale = lambda est: design.scales[est.index[2]] ** alpha  # noqa: E731
                ge = grad_tab.holder(alpha)
                ge_err = pair_error(grad_err, ge.index) / scale(ge)
                if _finite(hol):
                    ve = val_tab.holder(alpha)
                    pending.append(("holder_seminorm_decay", ve.value, math.exp(-alpha * t) * hol,
                                    pair_error(val_err, ve.index) / scale(ve), acase, ve.witness()))
                    pending.append(("gradient_holder_from_holder", ge.value, math.exp(-alpha * t) * c * hol,
                                    ge_err, acase, ge.witness()))
                decaying = 2 * math.exp(-alpha * t) * c ** (1 + alpha) * f.sup_norm
                pending.append(("gradient_holder_from_sup", ge.value, decaying, ge_err, acase, ge.witness()))
                pending.append(("gradient_holder_from_sup_proved", ge.value, decaying * math.exp(alpha * t),
                                ge_err, acase, ge.witness()))
                norm_a = f.holder_norm(alpha)
                if _finite(norm_a):
                    K = derive_lemma_constants(alpha)
                    for ident, lvl, r in (("gradient_from_holder", 1, K.C1 * t ** (-(1 - alpha) / 2)),
                                          ("hessian_from_holder", 2, K.C2 * t ** (-(1 - alpha / 2))),
                                          ("third_from_holder", 3, K.C3 * t ** (-(1.5 - alpha / 2)))):
                        i, w = _argmax_witness(norms[lvl], pts)
                        pending.append((ident, norms[lvl][i], r * norm_a, errs[lvl][i], acase, w))
            ms = clock() / max(len(pending), 1)
            out.extend(ctx.record(ident, lhs, rhs, err, case=cs, witness=w, ms=ms)
                       for ident, lhs, rhs, err, cs, w in pending)
    out.extend(_gradient_holder_counterexample(ctx))
    return out


def _gradient_holder_counterexample(ctx: SuiteContext) -> list[EstimateReport]:
    """Evaluate the gradient Holder quotient of T(t) sin(w<z,x>) at a far pair.

    For a sine ridge the H-gradient of T(t)f is A cos(k s) u with
    k = w e^{-t} sigma per unit H-length, so the optimal pair has length of
    order 1/k.  At large t this pair lies far outside any unit-scale design.
    """
    cfg, model = ctx.cfg, ctx.model
    sines = [e for e in ctx.corpus if isinstance(e.field, RidgeField) and isinstance(e.field.profile, Sine)
             and e.field.sigma > 0 and e.field.profile.phase == 0.0]
    if not sines:
        return []
    entry = sines[0]
    f = entry.field
    t, alpha = max(cfg.t_grid), max(cfg.alphas)
    from scipy import optimize
    half = optimize.brentq(lambda x: math.sin(x) * alpha - x * math.cos(x), 1e-9, math.pi / 2)
    k = f.profile.omega * math.exp(-t) * f.sigma
    length = 2.0 * half / k                                   # H-norm of the step
    s0 = (0.5 * math.pi - half) / (f.profile.omega * math.exp(-t))
    x = s0 * f.z / float(f.z @ f.z)
    h = model.to_ambient(length * f.u)
    clock = _clock()
    jet = semigroup_jet(model, f, t, np.stack([x, x + h]), 1, ctx.spec)
    q = float(np.linalg.norm(jet.grad[1] - jet.grad[0])) / length ** alpha
    err = float(jet.err[:, 1].sum()) / length ** alpha
    c = float(c_factor(t))
    decaying = 2 * math.exp(-alpha * t) * c ** (1 + alpha) * f.sup_norm
    case = {"field": entry.name, "t": t, "alpha": alpha, "pair": "far"}
    w = {"x": [float(v) for v in x], "h": [float(v) for v in h], "h_norm": length}
    ms = clock() / 2
    return [ctx.record("gradient_holder_from_sup_counterexample", q, decaying, err, case, w, check="info", ms=ms),
            ctx.record("gradient_holder_from_sup_proved", q, decaying * math.exp(alpha * t), err, case, w, ms=ms)]


# ---------------------------------------------------------------------------
# degeneracy
# ---------------------------------------------------------------------------

def _quotient(model, f, t, x, direction, step, spec) -> float:
    jet = semigroup_jet(model, f, t, np.stack([x, x + step * direction]), 0, spec)
    return abs(float(jet.value[1] - jet.value[0])) / step


def run_degeneracy_suite(ctx: SuiteContext) -> list[EstimateReport]:
    """Roughness along ker Q versus smoothing along range Q at t = 1."""
    model, spec = ctx.model, ctx.spec
    out = []
    if model.rank == model.dimension:
        return out
    candidates = [e for e in ctx.corpus if isinstance(e.field, RidgeField) and e.field.sigma == 0.0
                  and isinstance(e.field.profile, AbsClipPow) and e.field.profile.power < 1.0]
    t = 1.0
    c = float(c_factor(t))
    for entry in candidates:
        f = entry.field
        clock = _clock()
        x0 = np.zeros(model.dimension)
        kernel_dir = f.z / np.linalg.norm(f.z)
        q_small = _quotient(model, f, t, x0, kernel_dir, 1e-4, spec)
        q_large = _quotient(model, f, t, x0, kernel_dir, 1e-1, spec)
        ratio = q_small / q_large if q_large > 0 else math.inf
        case = {"field": entry.name, "t": t, "direction": "kernel"}
        out.append(ctx.record("kernel_direction_roughness", ratio, KERNEL_ROUGHNESS_FACTOR, 0.0, case,
                              {"x": list(x0), "q_small": q_small, "q_large": q_large}, check="lower",
                              ms=clock()))

        # same profile along the leading range eigenvector, probed where the
        # H-gradient of T(1)f is largest on a scan of the ridge line
        range_dir = model.range_vectors[:, 0]
        g = make_ridge(model, range_dir, f.profile, name=f"{entry.name}@range")
        clock = _clock()
        scan = ridge_scan(g, ctx.cfg.line_points, RIDGE_SCAN_HALF_WIDTH, math.exp(t))
        jet = semigroup_jet(model, g, t, scan, 1, spec)
        gn = target_norm(jet.grad)
        i, w = _argmax_witness(gn, scan)
        case = {"field": g.name, "t": t, "direction": "range"}
        out.append(ctx.record("range_direction_gradient", gn[i], c * g.sup_norm, float(jet.err[i, 1]), case,
                              w, ms=clock()))
        h_norm = 1.0 / math.sqrt(model.eigenvalues[0])           # ||range_dir||_H
        q = _quotient(model, g, t, scan[i], range_dir, 1e-4, spec)
        out.append(ctx.record("range_direction_quotient", q, c * g.sup_norm * h_norm, 0.0, case,
                              dict(w, step=1e-4), ms=clock()))
    return out


# ---------------------------------------------------------------------------
# schauder
# ---------------------------------------------------------------------------

def run_schauder_suite(ctx: SuiteContext) -> list[EstimateReport]:
    cfg, model = ctx.cfg, ctx.model
    design = ctx.design("resolvent")
    out = []
    for entry in ctx.bounded():
        f = entry.field
        for lam in cfg.lambdas:
            clock = _clock()
            b = ctx.bundle(entry, lam)
            case = {"field": entry.name, "lambda": lam}
            v = np.abs(b.value)
            i, w = _argmax_witness(v, b.probe)
            pending = [("resolvent_sup_bound", v[i], f.sup_norm / lam, b.err[i, 0], case, w, "upper"),
                       ("resolvent_sup_unscaled", v[i], f.sup_norm, b.err[i, 0], case, w, "info")]
            gn, hn = target_norm(b.grad), op_norm2(b.hess)
            hess_tab, hess_err = b.tables[0], b.tables[1]
            for alpha in cfg.alphas:
                norm_a = f.holder_norm(alpha)
                if not _finite(norm_a):
                    continue
                acase = dict(case, alpha=alpha)
                i, w = _argmax_witness(gn, b.probe)
                pending.append(("schauder_gradient", gn[i], schauder_gradient_constant(alpha, lam) * norm_a,
                                b.err[i, 1], acase, w, "upper"))
                i, w = _argmax_witness(hn, b.probe)
                pending.append(("schauder_hessian", hn[i], schauder_hessian_constant(alpha, lam) * norm_a,
                                b.err[i, 2], acase, w, "upper"))
                est = hess_tab.holder(alpha)
                err = pair_error(hess_err, est.index) / design.scales[est.index[2]] ** alpha
                pending.append(("schauder_hessian_holder", est.value, schauder_holder_constant(alpha) * norm_a,
                                err, acase, est.witness(), "upper"))
                if cfg.diagnostics:
                    pending.extend(_schauder_split(ctx, f, lam, alpha, norm_a, hess_tab, acase))
            ms = clock() / max(len(pending), 1)
            out.extend(ctx.record(ident, lhs, rhs, err, cs, w, check=chk, ms=ms)
                       for ident, lhs, rhs, err, cs, w, chk in pending)
    for entry in ctx.corpus:
        if entry.field.kind != "quadratic":
            continue
        f = entry.field
        pts = ctx.design("resolvent").points[: ctx.cfg.formula_points]
        exact = 2.0 * np.outer(f.w, f.w)
        for lam in cfg.lambdas:
            clock = _clock()
            hess = resolvent_jet(model, f, lam, pts, 2, ctx.tq, ctx.spec).hess
            ex = exact / (lam + 2.0)
            rel = float(op_norm2(hess - ex).max()) / max(float(op_norm2(ex)), 1e-300)
            out.append(ctx.record("resolvent_hessian_quadratic", rel, CLOSED_FORM_TOLERANCE, 0.0,
                                  {"field": entry.name, "lambda": lam}, ms=clock(), error_multiple=0.0))
    return out


def _schauder_split(ctx, f, lam, alpha, norm_a, table, case):
    """Short/long time pieces of D2 u at the per-scale maximising pairs."""
    model, design = ctx.model, table.design
    K = derive_lemma_constants(alpha)
    steps = design.steps(model)
    short_q, long_q, short_e, long_e = 0.0, 0.0, 0.0, 0.0
    wit_s = wit_l = {}
    for j, i, m in table.per_scale_witnesses(alpha):
        h_norm = float(design.scales[m])
        x = design.points[j]
        pair = np.stack([x, x + steps[i, m]])
        a = resolvent_window_jet(model, f, lam, pair, 2, 0.0, h_norm ** 2, ctx.tq, ctx.spec)
        full = np.stack([table.base[j], table.one[j, i, m]])
        da = float(op_norm2(a.hess[1] - a.hess[0]))
        db = float(op_norm2((full[1] - a.hess[1]) - (full[0] - a.hess[0])))
        ea = float(a.err[:, 2].sum())
        wit = {"x": [float(v) for v in x], "h": [float(v) for v in steps[i, m]], "h_norm": h_norm}
        if da / h_norm ** alpha > short_q:
            short_q, short_e, wit_s = da / h_norm ** alpha, ea / h_norm ** alpha, wit
        if db / h_norm ** alpha > long_q:
            long_q, long_e, wit_l = db / h_norm ** alpha, ea / h_norm ** alpha, wit
    return [("schauder_split_short", short_q, 4 * K.C2 / alpha * norm_a, short_e, case, wit_s, "upper"),
            ("schauder_split_long", long_q, 2 * K.C3 / (1 - alpha) * norm_a, long_e, case, wit_l, "upper")]


# ---------------------------------------------------------------------------
# zygmund
# ---------------------------------------------------------------------------

def run_zygmund_suite(ctx: SuiteContext) -> list[EstimateReport]:
    cfg, model = ctx.cfg, ctx.model
    c0, c1 = c0_constant(), c1_constant()
    out = []
    for entry in ctx.bounded():
        f = entry.field
        for lam in cfg.lambdas:
            clock = _clock()
            b = ctx.bundle(entry, lam)
            grad_tab, grad_err = b.tables[2], b.tables[3]
            est = grad_tab.zygmund()
            h_norm = float(grad_tab.design.scales[est.index[2]])
            case = {"field": entry.name, "lambda": lam}
            pending = [("zygmund_gradient", est.value, zygmund_constant() * f.sup_norm,
                        pair_error(grad_err, est.index, zygmund=True) / h_norm, case, est.witness())]
            if cfg.diagnostics:
                pending.extend(_zygmund_split(ctx, f, lam, grad_tab, case, c0, c1))
            ms = clock() / len(pending)
            out.extend(ctx.record(ident, lhs, rhs, err, cs, w, ms=ms) for ident, lhs, rhs, err, cs, w in pending)
    return out


def _zygmund_split(ctx, f, lam, table, case, c0, c1):
    model, design = ctx.model, table.design
    steps = design.steps(model)
    best = {"short": (0.0, 0.0, {}), "long": (0.0, 0.0, {})}
    for j, i, m in table.per_scale_witnesses(None, zygmund=True):
        h_norm = float(design.scales[m])
        x = design.points[j]
        trip = np.stack([x, x + steps[i, m], x + 2 * steps[i, m]])
        a = resolvent_window_jet(model, f, lam, trip, 1, 0.0, h_norm ** 2, ctx.tq, ctx.spec)
        full = np.stack([table.base[j], table.one[j, i, m], table.two[j, i, m]])
        sa = a.grad[2] - 2 * a.grad[1] + a.grad[0]
        bb = full - a.grad
        sb = bb[2] - 2 * bb[1] + bb[0]
        ea = float(a.err[0, 1] + 2 * a.err[1, 1] + a.err[2, 1]) / h_norm
        wit = {"x": [float(v) for v in x], "h": [float(v) for v in steps[i, m]], "h_norm": h_norm}
        for key, vec in (("short", sa), ("long", sb)):
            q = float(np.linalg.norm(vec)) / h_norm
            if q > best[key][0]:
                best[key] = (q, ea, wit)
    s, l = best["short"], best["long"]
    return [("zygmund_split_short", s[0], 2 * c0 * f.sup_norm, s[1], case, s[2]),
            ("zygmund_split_short_proved", s[0], 8 * c0 * f.sup_norm, s[1], case, s[2]),
            ("zygmund_split_long", l[0], 2 * c1 * f.sup_norm, l[1], case, l[2])]


# ---------------------------------------------------------------------------
# interpolation
# ---------------------------------------------------------------------------

def k_functional_upper(ctx: SuiteContext, f: ScalarField, scales, taus=TAU_GRID) -> tuple[np.ndarray, np.ndarray]:
    """Upper bounds K~(s) of K(s, f) from f = (f - T(tau)f) + T(tau)f.

    Returns (K~ at each s, minimising tau per s; 0 means f itself, inf the mean).
    The sup norms are sampled on design points and ridge scans.
    """
    model, spec, cfg = ctx.model, ctx.spec, ctx.cfg
    base = np.concatenate([ctx.design("smoothing").points,
                           ridge_scan(f, cfg.line_points, RIDGE_SCAN_HALF_WIDTH, 1.0)])
    fx0 = f(base)
    A, B = [], []
    for tau in taus:
        stretch = math.exp(min(tau, 30.0))
        pts = np.concatenate([base, ridge_scan(f, cfg.line_points, RIDGE_SCAN_HALF_WIDTH, stretch)])
        jet = semigroup_jet(model, f, tau, pts, 1, spec)
        fx = np.concatenate([fx0, f(pts[base.shape[0]:])])
        A.append(float(np.max(np.abs(fx - jet.value))))
        B.append(float(target_norm(jet.grad).max()))
    options_tau = list(taus)
    if _finite(f.grad_sup):
        A.insert(0, 0.0)
        B.insert(0, float(f.grad_sup))
        options_tau.insert(0, 0.0)
    mean = float(semigroup_jet(model, f, MEAN_TIME, np.zeros((1, model.dimension)), 0, spec).value[0])
    A.append(float(np.max(np.abs(fx0 - mean))))
    B.append(0.0)
    options_tau.append(math.inf)
    A, B = np.asarray(A), np.asarray(B)
    scales = np.asarray(scales, dtype=float)
    total = A[None, :] + scales[:, None] * B[None, :]
    idx = np.argmin(total, axis=1)
    return total[np.arange(scales.size), idx], np.asarray(options_tau)[idx]


def run_interpolation_suite(ctx: SuiteContext) -> list[EstimateReport]:
    cfg, model = ctx.cfg, ctx.model
    design = ctx.design("smoothing")
    out = []
    for entry in ctx.bounded():
        f = entry.field
        hol = [a for a in cfg.alphas if _finite(f.exact_holder(a))]
        if hol:
            clock = _clock()
            kt, taus = k_functional_upper(ctx, f, design.scales)
            tab = difference_tables(lambda x: [f(x)], design, model)[0]
            pending = []
            for alpha in hol:
                est = tab.holder(alpha)
                per_scale = 2.0 * kt / design.scales ** alpha
                m = int(np.argmax(per_scale))
                case = {"field": entry.name, "alpha": alpha}
                w = dict(est.witness(), s=float(design.scales[m]), tau=float(taus[m]))
                pending.append((est.value, float(per_scale[m]), case, w))
            ms = clock() / len(pending)
            out.extend(ctx.record("interpolation_k_functional", lhs, rhs, 0.0, cs, w, ms=ms)
                       for lhs, rhs, cs, w in pending)
        for lam in cfg.lambdas:
            clock = _clock()
            b = ctx.bundle(entry, lam)
            u = float(np.abs(b.value).max())
            lu = float(np.abs(lam * b.value - f(b.probe)).max())
            gn = target_norm(b.grad)
            i, w = _argmax_witness(gn, b.probe)
            rhs = interpolation_constant() * math.sqrt(u * lu)
            # errors of u and Lu enter the right side; the larger of the two sides is shifted
            err = float(b.err[i, 1]) + interpolation_constant() * math.sqrt(
                max(u * lam * float(b.err[:, 0].max()) + lu * float(b.err[:, 0].max()), 0.0))
            case = {"field": entry.name, "lambda": lam}
            w = dict(w, u_sup=u, lu_sup=lu)
            ms = clock() / 2
            out.append(ctx.record("interpolation_multiplicative", gn[i], rhs, err, case, w, ms=ms))
            out.append(ctx.record("interpolation_multiplicative_proved", gn[i], 2 * rhs, err, case, w, ms=ms))
    return out


# ---------------------------------------------------------------------------
# parabolic
# ---------------------------------------------------------------------------

def _source(cfg: SuiteConfig, f: ScalarField) -> TimeField:
    if cfg.source_weight == "cos":
        return TimeField(f, np.cos, 1.0, f"{f.name}*cos(t)")
    return constant_in_time(f)


def _c2alpha_data_norm(f: ScalarField, alpha: float) -> float | None:
    """||f||_{C^{2+a}} from ridge metadata (sup + grad sup + Hessian sup + [D2 f]_a)."""
    if not isinstance(f, RidgeField) or not f.has_h_hessian or not _finite(f.grad_sup):
        return None
    if f.sigma == 0.0:
        return f.sup_norm
    d2 = f.profile.derivative(2)
    hol = d2.holder(alpha)
    if not _finite(hol) or not _finite(d2.sup):
        return None
    return f.sup_norm + f.grad_sup + d2.sup * f.sigma ** 2 + hol * f.sigma ** (2 + alpha)


def run_parabolic_suite(ctx: SuiteContext) -> list[EstimateReport]:
    cfg, model = ctx.cfg, ctx.model
    design = ctx.design("parabolic")
    by_index = {e.index: e for e in ctx.corpus}
    times = [cfg.horizon * k / cfg.parabolic_times for k in range(cfg.parabolic_times + 1)]
    out = []
    for fi, gi in cfg.parabolic_pairs:
        fe, ge = by_index[fi], by_index[gi]
        f, g = fe.field, _source(cfg, ge.field)
        alphas = [a for a in cfg.alphas if _c2alpha_data_norm(f, a) is not None
                  and g.uniform_holder_norm(a) is not None]
        if not alphas:
            continue
        clock = _clock()
        worst = {a: (-1.0, None, None) for a in alphas}
        for t in times:
            pts = np.concatenate([design.points, ridge_scan(f, cfg.line_points, RIDGE_SCAN_HALF_WIDTH, 1.0)])
            jet = mild_jet(model, f, g, t, pts, 2, ctx.tq, ctx.spec)
            base = (float(np.abs(jet.value).max()) + float(target_norm(jet.grad).max())
                    + float(op_norm2(jet.hess).max()))

            def hess(x, t=t):
                return [mild_jet(model, f, g, t, x, 2, ctx.tq, ctx.spec).hess]

            tab = difference_tables(hess, design, model)[0]
            for a in alphas:
                est = tab.holder(a)
                total = base + est.value
                if total > worst[a][0]:
                    worst[a] = (total, t, est.witness())
        ms = clock() / len(alphas)
        for a in alphas:
            rhs = _c2alpha_data_norm(f, a) + g.uniform_holder_norm(a)
            total, t_star, w = worst[a]
            case = {"f": fe.name, "g": ge.name, "alpha": a, "horizon": cfg.horizon}
            out.append(ctx.record("parabolic_c2alpha", total, rhs, 0.0, case, dict(w, t=t_star),
                                  check="finite", ms=ms))
        # f = 0, time-constant source: truncated Laplace integral of T(s)g
        clock = _clock()
        src = constant_in_time(ge.field)
        pts = design.points[: cfg.formula_points]
        v = mild_jet(model, None, src, cfg.horizon, pts, 0, ctx.tq, ctx.spec).value
        ref = np.array([integrate.quad(
            lambda s, x=x: float(semigroup_jet(model, ge.field, s, x[None, :], 0, ctx.spec).value[0]),
            0.0, cfg.horizon, epsabs=1e-13, epsrel=1e-12, limit=200)[0] for x in pts])
        rel = float(np.abs(v - ref).max()) / max(float(np.abs(ref).max()), 1e-300)
        out.append(ctx.record("parabolic_truncated_resolvent", rel, CLOSED_FORM_TOLERANCE, 0.0,
                              {"g": ge.name, "t": cfg.horizon}, ms=clock(), error_multiple=0.0))
        # t = 0 returns the datum
        clock = _clock()
        j0 = mild_jet(model, f, g, 0.0, pts, 2, ctx.tq, ctx.spec)
        gap = max(float(np.abs(j0.value - f(pts)).max()), float(op_norm2(j0.hess - f.h_hessian(pts)).max()))
        out.append(ctx.record("parabolic_initial_datum", gap, 0.0, 0.0, {"f": fe.name, "t": 0.0},
                              ms=clock(), error_multiple=0.0))
    for entry in ctx.corpus:
        if entry.field.kind != "quadratic":
            continue
        clock = _clock()
        f = entry.field
        pts = design.points[: cfg.formula_points]
        hess = mild_jet(model, f, None, 1.0, pts, 2, ctx.tq, ctx.spec).hess
        ex = 2.0 * math.exp(-2.0) * np.outer(f.w, f.w)
        rel = float(op_norm2(hess - ex).max()) / max(float(op_norm2(ex)), 1e-300)
        out.append(ctx.record("parabolic_quadratic_closed_form", rel, CLOSED_FORM_TOLERANCE, 0.0,
                              {"f": entry.name, "t": 1.0}, ms=clock(), error_multiple=0.0))
    return out


# ---------------------------------------------------------------------------
# formulas, closed forms, identities
# ---------------------------------------------------------------------------

def _fd_error(model, level_fn, x, order, step) -> tuple[float, float, float]:
    """Central differences of level order-1 along whitened basis steps vs level ``order``.

    All sizes are maximum absolute entries in whitened coordinates, so an
    asymmetric difference error is not hidden by symmetrisation.  Returns
    (max difference, max formula entry, max lower-level entry).
    """
    r = model.rank
    basis = model.to_ambient(np.eye(r))                        # (r, n)
    n = x.shape[0]
    shifted = np.concatenate([x[:, None, :] + step * basis[None], x[:, None, :] - step * basis[None]], axis=1)
    lower_sh = level_fn(order - 1, shifted.reshape(-1, x.shape[1]))
    lower_sh = lower_sh.reshape((n, 2 * r) + lower_sh.shape[1:])
    fd = (lower_sh[:, :r] - lower_sh[:, r:]) / (2 * step)    # (n, r, ...) derivative index first
    fd = np.moveaxis(fd, 1, -1)                               # derivative index last
    formula = level_fn(order, x)
    lower = level_fn(order - 1, x)
    entry = lambda v: np.abs(np.asarray(v)).reshape(n, -1).max(axis=1)  # noqa: E731
    diff, fn, ln = entry(fd - formula), entry(formula), entry(lower)
    return float(diff.max()), float(fn.max()), float(ln.max())


def run_formulas_suite(ctx: SuiteContext) -> list[EstimateReport]:
    cfg, model, spec = ctx.cfg, ctx.model, ctx.spec
    pts = ctx.design("smoothing").points[: cfg.formula_points]
    out = []
    ids = {False: ("gradient_formula_fd", "hessian_formula_fd", "third_formula_fd"),
           True: ("gradient_formula_c1_fd", "hessian_formula_c1_fd", "third_formula_c1_fd")}
    for entry in ctx.corpus:
        f = entry.field
        for t in cfg.formula_times:
            for c1 in (False, True):
                if c1 and not f.has_h_gradient:
                    continue

                def level(k, x, c1=c1):
                    if k == 0:
                        return semigroup_jet(model, f, t, x, 0, spec).value
                    if c1:
                        return semigroup_jet_c1(model, f, t, x, k, spec).level(k)
                    return semigroup_jet(model, f, t, x, k, spec).level(k)

                # natural size of level k: c(t)^(k-1) times the gradient size; keeps
                # the ratio meaningful when higher levels vanish (affine data)
                grad_size = float(np.abs(level(1, pts)).max())
                for order in (1, 2, 3):
                    clock = _clock()
                    diff, fn, ln = _fd_error(model, level, pts, order, FD_STEPS[order])
                    denom = max(fn, ln, float(c_factor(t)) ** (order - 1) * grad_size)
                    rel = diff / denom if denom > 0 else (0.0 if diff == 0 else math.inf)
                    case = {"field": entry.name, "t": t, "step": FD_STEPS[order]}
                    out.append(ctx.record(ids[c1][order - 1], rel, FD_TOLERANCE[order], 0.0, case,
                                          ms=clock(), error_multiple=0.0))
    return out


def _rel(num, exact) -> float:
    num, exact = np.asarray(num, dtype=float), np.asarray(exact, dtype=float)
    scale = float(np.abs(exact).max())
    d = float(np.abs(num - exact).max())
    return d / scale if scale > 0 else d


def run_closed_forms_suite(ctx: SuiteContext) -> list[EstimateReport]:
    cfg, model, spec, tq = ctx.cfg, ctx.model, ctx.spec, ctx.tq
    pts = ctx.design("smoothing").points[: cfg.formula_points]
    out = []

    def add(ident, num, exact, case, clock):
        out.append(ctx.record(ident, _rel(num, exact), CLOSED_FORM_TOLERANCE, 0.0, case, ms=clock(),
                              error_multiple=0.0))

    for entry in ctx.corpus:
        f = entry.field
        if f.kind == "linear":
            lin = f(pts)
            for t in cfg.formula_times:
                clock = _clock()
                add("semigroup_linear_closed_form", semigroup_jet(model, f, t, pts, 0, spec).value,
                    math.exp(-t) * lin, {"field": entry.name, "t": t}, clock)
            for lam in cfg.lambdas:
                clock = _clock()
                add("resolvent_linear_closed_form", resolvent_jet(model, f, lam, pts, 0, tq, spec).value,
                    lin / (lam + 1), {"field": entry.name, "lambda": lam}, clock)
            for t in cfg.formula_times:
                clock = _clock()
                add("mild_homogeneous_closed_form", mild_jet(model, f, None, t, pts, 0, tq, spec).value,
                    math.exp(-t) * lin, {"field": entry.name, "t": t}, clock)
                clock = _clock()
                add("mild_linear_source_closed_form",
                    mild_jet(model, None, constant_in_time(f), t, pts, 0, tq, spec).value,
                    (1 - math.exp(-t)) * lin, {"field": entry.name, "t": t}, clock)
        elif f.kind == "quadratic":
            sq = f(pts)
            w2 = float(f.w @ f.w)
            for t in cfg.formula_times:
                clock = _clock()
                add("semigroup_quadratic_closed_form", semigroup_jet(model, f, t, pts, 0, spec).value,
                    math.exp(-2 * t) * sq + (1 - math.exp(-2 * t)) * w2, {"field": entry.name, "t": t}, clock)
            for lam in cfg.lambdas:
                clock = _clock()
                add("resolvent_quadratic_closed_form", resolvent_jet(model, f, lam, pts, 0, tq, spec).value,
                    sq / (lam + 2) + w2 * (1 / lam - 1 / (lam + 2)), {"field": entry.name, "lambda": lam}, clock)
        elif isinstance(f, ConstantField):
            for lam in cfg.lambdas:
                clock = _clock()
                add("resolvent_constant_closed_form", resolvent_jet(model, f, lam, pts, 0, tq, spec).value,
                    np.full(len(pts), f.value / lam), {"field": entry.name, "lambda": lam}, clock)
    one = constant_in_time(ConstantField(model, 1.0))
    for t in cfg.formula_times:
        clock = _clock()
        add("mild_unit_source_closed_form", mild_jet(model, None, one, t, pts, 0, tq, spec).value,
            np.full(len(pts), t), {"t": t}, clock)
    return out


def tabulated_profile(profile, reach: float, uniform: int = 801, clustered: int = 120) -> CallableProfile:
    """Cubic-spline table of a costly profile on [-reach, reach].

    One spline per segment between breakpoints, with nodes clustered
    geometrically towards each breakpoint where the tabulated function may
    have a power-type cusp; outside the interval the end values are held.
    """
    bps = sorted(b for b in profile.breakpoints if -reach < b < reach)
    edges = [-reach] + bps + [reach]
    nodes = [np.linspace(-reach, reach, uniform)]
    for b in bps:
        d = np.geomspace(1e-12, reach, clustered)
        nodes += [b - d, b + d]
    grid = np.unique(np.clip(np.concatenate(nodes + [np.asarray(edges)]), -reach, reach))
    vals = profile(grid)
    pieces = []
    for lo, hi in zip(edges[:-1], edges[1:]):
        m = (grid >= lo) & (grid <= hi)
        pieces.append((lo, hi, interpolate.CubicSpline(grid[m], vals[m])))

    def psi(r):
        r = np.clip(np.asarray(r, dtype=float), -reach, reach)
        out = np.empty_like(r)
        for lo, hi, spl in pieces:
            m = (r >= lo) & (r <= hi)
            out[m] = spl(r[m])
        return out

    return CallableProfile(psi, profile.breakpoints, profile.singular, sup=profile.sup,
                           name=f"table[{profile!r}]", scale=profile.scale)


def run_identities_suite(ctx: SuiteContext) -> list[EstimateReport]:
    cfg, model, spec, tq = ctx.cfg, ctx.model, ctx.spec, ctx.tq
    pts = ctx.design("smoothing").points[: cfg.formula_points]
    out = []
    for entry in ctx.bounded():
        f = entry.field
        scan = ridge_scan(f, 21, 4.0, 1.0)
        x = np.concatenate([pts, scan])
        if isinstance(f, RidgeField):
            for t, s in SEMIGROUP_LAW_PAIRS:
                clock = _clock()
                direct = semigroup_jet(model, f, t + s, x, 0, spec)
                inner = make_ridge(model, f.z, semigroup_profile(f, s, spec), name=f"T({s:g}){entry.name}")
                nested = semigroup_jet(model, inner, t, x, 0, spec)
                gap = float(np.abs(direct.value - nested.value).max())
                tol = 2.0 * (cfg.engine_tol * max(1.0, f.sup_norm) + float(direct.err[:, 0].max())
                             + float(nested.err[:, 0].max()))
                out.append(ctx.record("semigroup_law", gap, tol, 0.0, {"field": entry.name, "t": t, "s": s},
                                      ms=clock(), error_multiple=0.0))
            clock = _clock()
            r1 = resolvent_jet(model, f, 1.0, x, 0, tq, spec).value
            r2 = resolvent_jet(model, f, 2.0, x, 0, tq, spec).value
            reach = float(np.abs(x @ f.z).max()) + spec.ridge_half_width * f.sigma + 1.0
            inner = make_ridge(model, f.z, tabulated_profile(ridge_resolvent_profile(f, 2.0, tq, spec), reach),
                               name=f"R(2){entry.name}")
            nested = resolvent_jet(model, inner, 1.0, x, 0, tq, spec).value
            rel = _rel(nested, r1 - r2)
            out.append(ctx.record("resolvent_identity", rel, RESOLVENT_IDENTITY_TOLERANCE, 0.0,
                                  {"field": entry.name, "lambda": 1.0, "mu": 2.0}, ms=clock(), error_multiple=0.0))
        elif isinstance(f, ConstantField):
            clock = _clock()
            for t, s in SEMIGROUP_LAW_PAIRS:
                gap = float(np.abs(semigroup_jet(model, f, t + s, x, 0, spec).value - f.value).max())
                out.append(ctx.record("semigroup_law", gap, 2.0 * cfg.engine_tol * max(1.0, f.sup_norm), 0.0,
                                      {"field": entry.name, "t": t, "s": s}, ms=clock(), error_multiple=0.0))
            r1 = resolvent_jet(model, f, 1.0, x, 0, tq, spec).value
            r2 = resolvent_jet(model, f, 2.0, x, 0, tq, spec).value
            nested = resolvent_jet(model, ConstantField(model, f.value / 2.0), 1.0, x, 0, tq, spec).value
            out.append(ctx.record("resolvent_identity", _rel(nested, r1 - r2), RESOLVENT_IDENTITY_TOLERANCE, 0.0,
                                  {"field": entry.name, "lambda": 1.0, "mu": 2.0}, ms=clock(), error_multiple=0.0))
    return out


SUITES = {
    "formulas": run_formulas_suite,
    "closed_forms": run_closed_forms_suite,
    "identities": run_identities_suite,
    "smoothing": run_smoothing_suite,
    "degeneracy": run_degeneracy_suite,
    "schauder": run_schauder_suite,
    "zygmund": run_zygmund_suite,
    "interpolation": run_interpolation_suite,
    "parabolic": run_parabolic_suite,
}


def run_suites(cfg: SuiteConfig, names=None, ctx: SuiteContext | None = None) -> list[EstimateReport]:
    """Run the named suites (all by default) in a fixed order."""
    names = list(SUITE_ORDER) if names is None else list(names)
    unknown = [n for n in names if n not in SUITES]
    if unknown:
        raise KeyError(f"unknown suite(s): {', '.join(unknown)}")
    ctx = ctx or SuiteContext(cfg)
    reports: list[EstimateReport] = []
    for name in SUITE_ORDER:
        if name in names:
            reports.extend(SUITES[name](ctx))
    return reports
