"""Resolvent R(lambda, L)f and mild solutions by time quadrature.

Time integrals are computed with Gauss-Kronrod 15 panels whose embedded
Gauss 7 rule gives the error estimate.  Near t = 0, where H-derivatives of
T(t)f blow up like t^{-k/2 + alpha/2}, the substitution t = tau^p and a
geometric panel grading in tau make the integrand bounded; beyond the split
point panels double in length up to a truncation time T_max whose tail
e^{-lambda T_max} B / lambda is below a tenth of the tolerance.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace
from functools import lru_cache

import numpy as np

from .errors import MissingMetadata, SpecInvalid
from .fields import RidgeField, ScalarField, TimeField
from .gaussian import CovarianceModel, HVector, c_factor, kp_constant, make_h_vector
from .profiles import CallableProfile
from .quadrature import QuadratureSpec, kronrod15
from .semigroup import Jet, semigroup_hess_c2, semigroup_jet


@dataclass(frozen=True)
class TimeQuadrature:
    """Panel layout for time integrals.

    Parameters
    ----------
    power : float
        Substitution t = tau**power on [0, split].  Solver calls raise it to
        2 / alpha for second derivatives of alpha-Holder data, which makes the
        transformed integrand bounded.
    split : float
        End of the graded region (clipped to the horizon for finite intervals).
    grading : float
        Ratio between consecutive graded panels in tau.
    panels : int
        Number of graded panels; the innermost panel reaches down to 0.
    tol : float
        Target absolute accuracy used for the truncation time.
    max_time : float
        Hard cap for T_max.
    """

    power: float = 2.0
    split: float = 0.25
    grading: float = 0.5
    panels: int = 20
    tol: float = 1e-10
    max_time: float = 400.0

    def __post_init__(self):
        if self.power < 1 or self.split <= 0 or not 0 < self.grading < 1 or self.panels < 1:
            raise SpecInvalid(f"invalid time quadrature {self}")
        if self.tol <= 0 or self.max_time <= self.split:
            raise SpecInvalid("time quadrature tolerance/horizon out of range")


@dataclass(frozen=True)
class TimeRule:
    nodes: np.ndarray
    weights: np.ndarray        # Kronrod weights (including e^{-lambda t})
    gauss: np.ndarray          # embedded Gauss weights
    panel: np.ndarray          # panel index of every node
    tail: float                # bound on the truncated tail (relative to B)
    t_max: float


def _graded_panels(tq: TimeQuadrature, end: float):
    """Nodes/weights on [0, end] with t = tau^p and geometric grading in tau."""
    xk, wk, wg = kronrod15()
    tau_end = end ** (1.0 / tq.power)
    edges = tau_end * tq.grading ** np.arange(tq.panels + 1)
    edges = np.append(edges, 0.0)[::-1]
    nodes, kw, gw, pid = [], [], [], []
    for i, (lo, hi) in enumerate(zip(edges[:-1], edges[1:])):
        tau = lo + (hi - lo) * xk
        jac = tq.power * tau ** (tq.power - 1.0) * (hi - lo)
        nodes.append(tau ** tq.power)
        kw.append(wk * jac)
        gw.append(wg * jac)
        pid.append(np.full(15, i))
    return [np.concatenate(v) for v in (nodes, kw, gw, pid)]


def _plain_panels(edges, start_id):
    xk, wk, wg = kronrod15()
    nodes, kw, gw, pid = [], [], [], []
    for i, (lo, hi) in enumerate(zip(edges[:-1], edges[1:])):
        nodes.append(lo + (hi - lo) * xk)
        kw.append(wk * (hi - lo))
        gw.append(wg * (hi - lo))
        pid.append(np.full(15, start_id + i))
    if not nodes:
        return [np.zeros(0)] * 3 + [np.zeros(0, dtype=int)]
    return [np.concatenate(v) for v in (nodes, kw, gw, pid)]


@lru_cache(maxsize=256)
def laplace_rule(tq: TimeQuadrature, lam: float, bound: float = 1.0) -> TimeRule:
    """Rule for int_0^inf e^{-lam t} F(t) dt with |F(t)| <= bound for t >= split."""
    if lam <= 0:
        raise ValueError("lambda must be positive")
    t_max = tq.split
    target = math.log(max(10.0 * bound / (lam * tq.tol), 1.0)) / lam
    while t_max < target and t_max < tq.max_time:
        t_max *= 2.0
    t_max = min(t_max, tq.max_time)
    g = _graded_panels(tq, tq.split)
    k = int(round(math.log2(t_max / tq.split)))
    edges = tq.split * 2.0 ** np.arange(k + 1)
    p = _plain_panels(edges, int(g[3].max()) + 1)
    nodes, kw, gw, pid = (np.concatenate([a, b]) for a, b in zip(g, p))
    damp = np.exp(-lam * nodes)
    tail = math.exp(-lam * t_max) / lam
    return TimeRule(nodes, kw * damp, gw * damp, pid.astype(int), tail, t_max)


@lru_cache(maxsize=512)
def interval_rule(tq: TimeQuadrature, start: float, end: float, lam: float = 0.0,
                  graded_at: str = "start") -> TimeRule:
    """Rule for int_start^end e^{-lam t} F(t) dt, graded towards ``graded_at``.

    With ``graded_at="start"`` the singular end is ``start`` (nodes are
    start + t); ``"end"`` mirrors the layout.
    """
    length = end - start
    if length < 0:
        raise ValueError("empty interval")
    if length == 0:
        z = np.zeros(0)
        return TimeRule(z, z, z, np.zeros(0, dtype=int), 0.0, end)
    split = min(tq.split, length)
    g = _graded_panels(tq, split)
    n_outer = int(math.ceil((length - split) / tq.split - 1e-12)) if length > split else 0
    p = _plain_panels(np.linspace(split, length, n_outer + 1) if n_outer else np.array([split]),
                      int(g[3].max()) + 1)
    off, kw, gw, pid = (np.concatenate([a, b]) for a, b in zip(g, p))
    nodes = start + off if graded_at == "start" else end - off
    damp = np.exp(-lam * nodes)
    return TimeRule(nodes, kw * damp, gw * damp, pid.astype(int), 0.0, end)


def _contract(levels, rule: TimeRule, n: int):
    """Integrate stacks of per-node values (n*K, ...) against the rule.

    Returns the Kronrod integrals and, per row, the sum over panels of the
    norm of (Kronrod - Gauss) as the quadrature error estimate.
    """
    k = rule.nodes.size
    panels = np.unique(rule.panel)
    delta = (rule.panel[None, :] == panels[:, None]) * (rule.weights - rule.gauss)[None, :]
    out, qerr = [], []
    for v in levels:
        v = v.reshape((n, k) + v.shape[1:])
        out.append(np.tensordot(v, rule.weights, axes=([1], [0])))
        per = np.tensordot(v, delta, axes=([1], [1]))          # (n, ..., P)
        per = per.reshape(n, -1, panels.size)
        qerr.append(np.sqrt((per ** 2).sum(axis=1)).sum(axis=1))
    return out, qerr


def _integrand_bound(f: ScalarField, order: int, split: float) -> float:
    if f.bounded:
        c = c_factor(split)
        const = (1.0, 1.0, 2.0, 3.0 + kp_constant(3.0) ** 3)[order]
        return max(const * c ** order * f.sup_norm, 1e-300)
    # polynomial formula-mode fields: generous fixed bound
    return 1e6


def _effective(tq: TimeQuadrature, f: ScalarField, order: int) -> TimeQuadrature:
    if order >= 2:
        reg = f.regularity
        if reg <= 0:
            raise MissingMetadata(f"{f.name}: second H-derivatives of the resolvent need Holder data")
        need = 2.0 / min(reg, 1.0)
        if need > tq.power:
            return replace(tq, power=need)
    return tq


_KINK_PANELS = 24          # GK15 panels per kink-free segment
_KINK_CHUNK = 2048


def _kernel_ridge_jet(model, f: RidgeField, x2, order, window, tail) -> Jet:
    """Time integral of T(t)f for a ridge along ker(Q) (sigma = 0).

    Here T(t)f(x) = phi(e^{-t} s) exactly, with s = <z, x>, and every
    H-derivative vanishes.  The integrand has a kink wherever e^{-t} s
    crosses a profile breakpoint; the time axis is split there for each
    point so that every GK15 panel sees a smooth integrand.
    """
    start, end, lam, weight = window
    n, r = x2.shape[0], model.rank
    xk, wk, wg = kronrod15()
    s_all = x2 @ f.z
    bps = np.array([b for b in f.profile.breakpoints if b != 0.0])
    value = np.zeros(n)
    qerr = np.zeros(n)
    for lo in range(0, n, _KINK_CHUNK):
        s = s_all[lo:lo + _KINK_CHUNK]
        m = s.size
        if bps.size:
            with np.errstate(divide="ignore", invalid="ignore"):
                kinks = np.log(s[:, None] / bps[None, :])          # nan where signs differ
            kinks = np.where(np.isfinite(kinks) & (kinks > start) & (kinks < end), kinks, end)
            edges = np.sort(np.concatenate([np.full((m, 1), start), kinks, np.full((m, 1), end)], axis=1), axis=1)
        else:
            edges = np.tile([start, end], (m, 1))
        frac = np.linspace(0.0, 1.0, _KINK_PANELS + 1)
        seg_lo, seg_hi = edges[:, :-1], edges[:, 1:]
        pan = seg_lo[..., None] + (seg_hi - seg_lo)[..., None] * frac[None, None, :]
        plo, phi_ = pan[..., :-1].reshape(m, -1), pan[..., 1:].reshape(m, -1)
        width = phi_ - plo                                               # (m, P)
        t = plo[..., None] + width[..., None] * xk                       # (m, P, 15)
        w = np.exp(-lam * t)
        if weight is not None:
            w = w * weight(t)
        vals = f.profile(np.exp(-t) * s[:, None, None]) * w
        kron = (vals * wk).sum(axis=2) * width
        gauss = (vals * wg).sum(axis=2) * width
        value[lo:lo + m] = kron.sum(axis=1)
        qerr[lo:lo + m] = np.abs(kron - gauss).sum(axis=1)
    zeros = [value, np.zeros((n, r)), np.zeros((n, r, r)), np.zeros((n, r, r, r))][: order + 1]
    err = np.zeros((n, order + 1))
    err[:, 0] = qerr + tail
    zeros += [None] * (4 - len(zeros))
    return Jet(*zeros, err=err, engine="kernel-ridge")


def _integrate_jet(model, f, x, order, rule: TimeRule, spec, tail_bound: float, window=None) -> Jet:
    """Contract the semigroup jet against a time rule.

    ``window = (start, end, lam, weight)`` describes the same integral
    analytically and enables the kink-aligned path for ridges along ker(Q).
    """
    x2 = np.atleast_2d(np.asarray(x, dtype=float))
    n, k = x2.shape[0], rule.nodes.size
    spec = spec or QuadratureSpec()
    if (window is not None and isinstance(f, RidgeField) and f.sigma == 0.0 and spec.ridge_reduction
            and window[1] > window[0]):
        return _kernel_ridge_jet(model, f, x2, order, window, tail_bound * rule.tail)
    if k == 0:
        r = model.rank
        zeros = [np.zeros(n), np.zeros((n, r)), np.zeros((n, r, r)), np.zeros((n, r, r, r))][: order + 1]
        zeros += [None] * (4 - len(zeros))
        return Jet(*zeros, err=np.zeros((n, order + 1)), engine="empty")
    X = np.repeat(x2, k, axis=0)
    T = np.tile(rule.nodes, n)
    jet = semigroup_jet(model, f, T, X, order, spec)
    levels, qerr = _contract([jet.level(i) for i in range(order + 1)], rule, n)
    node_err = jet.err.reshape(n, k, order + 1)
    err = np.empty((n, order + 1))
    for i in range(order + 1):
        err[:, i] = node_err[:, :, i] @ np.abs(rule.weights) + qerr[i] + tail_bound * rule.tail
    levels += [None] * (4 - len(levels))
    return Jet(levels[0], levels[1], levels[2], levels[3], err, jet.engine)


def resolvent_jet(model: CovarianceModel, f: ScalarField, lam: float, x, order: int = 0,
                  tq: TimeQuadrature | None = None, spec: QuadratureSpec | None = None) -> Jet:
    """R(lam, L)f and its first ``order`` H-derivatives at the rows of x."""
    tq = _effective(tq or TimeQuadrature(), f, order)
    bound = _integrand_bound(f, order, tq.split)
    rule = laplace_rule(tq, float(lam), bound)
    return _integrate_jet(model, f, x, order, rule, spec, bound, (0.0, rule.t_max, float(lam), None))


def resolvent_window_jet(model, f, lam, x, order, start, end, tq=None, spec=None) -> Jet:
    """int_start^end e^{-lam t} D^k T(t)f(x) dt for k <= order (graded at ``start``)."""
    tq = _effective(tq or TimeQuadrature(), f, order)
    rule = interval_rule(tq, float(start), float(end), float(lam))
    return _integrate_jet(model, f, x, order, rule, spec, 0.0, (float(start), float(end), float(lam), None))


def _single(v, x):
    return v[0] if np.asarray(x).ndim == 1 else v


def resolvent(model, f, lam, x, tq=None, spec=None):
    """u = R(lam, L)f at x (float for a single point)."""
    if not f.bounded and f.sup_norm is None and f.kind not in ("linear", "quadratic"):
        raise ValueError("resolvent needs bounded data")
    v = resolvent_jet(model, f, lam, x, 0, tq, spec).value
    return float(v[0]) if np.asarray(x).ndim == 1 else v


def resolvent_grad(model, f, lam, x, tq=None, spec=None) -> HVector:
    g = resolvent_jet(model, f, lam, x, 1, tq, spec).grad
    return make_h_vector(model, _single(g, x))


def resolvent_hess(model, f, lam, x, tq=None, spec=None) -> np.ndarray:
    """D^2_H u; refused for data without Holder regularity (the integral diverges)."""
    return _single(resolvent_jet(model, f, lam, x, 2, tq, spec).hess, x)


def ridge_resolvent_profile(f: RidgeField, lam: float, tq: TimeQuadrature | None = None,
                            spec: QuadratureSpec | None = None) -> CallableProfile:
    """Profile psi with R(lam, L)f = psi(<z, .>) for a ridge f (nested evaluations)."""
    from .gaussian import build_covariance

    tq = tq or TimeQuadrature()
    spec = spec or QuadratureSpec()
    line = build_covariance(np.array([[f.sigma ** 2]])) if f.sigma > 0 else build_covariance(np.zeros((1, 1)))
    inner = RidgeField(line, np.array([1.0]), f.profile)

    def psi(r):
        r = np.asarray(r, dtype=float)
        v = resolvent_jet(line, inner, lam, r.reshape(-1, 1), 0, tq, spec).value
        return v.reshape(r.shape)

    sup = f.profile.sup / lam if math.isfinite(f.profile.sup) else math.inf
    return CallableProfile(psi, f.profile.breakpoints, (True,) * len(f.profile.breakpoints), sup=sup,
                           name=f"R({lam:g})[{f.profile!r}]", scale=f.profile.scale)


def _duhamel_rule(tq, t):
    return interval_rule(tq, 0.0, float(t), 0.0)


def mild_jet(model, f: ScalarField | None, g: TimeField | None, t: float, x, order: int = 0,
             tq: TimeQuadrature | None = None, spec: QuadratureSpec | None = None,
             data_c2: bool = True) -> Jet:
    """v(t) = T(t)f + int_0^t T(s) g(t - s) ds and its H-derivatives up to ``order``.

    The data term at order 2 uses e^{-2t} T(t)[D^2_H f] when f carries a
    closed-form H-Hessian (valid down to t = 0); the Duhamel term is graded
    at s = 0 where D^k T(s) is singular.
    """
    tq = tq or TimeQuadrature()
    x2 = np.atleast_2d(np.asarray(x, dtype=float))
    n, r = x2.shape[0], model.rank
    if t < 0:
        raise ValueError("t must be nonnegative")
    shapes = [(n,), (n, r), (n, r, r), (n, r, r, r)]
    levels = [np.zeros(s) for s in shapes[: order + 1]]
    err = np.zeros((n, order + 1))
    engine = "mild"
    if f is not None:
        if t == 0 or order == 0:
            if t == 0:
                direct = [f(x2)]
                if order >= 1:
                    direct.append(f.h_gradient(x2))
                if order >= 2:
                    direct.append(f.h_hessian(x2))
                if order >= 3:
                    raise ValueError("third derivative at t = 0 is not available")
                for i in range(order + 1):
                    levels[i] = levels[i] + direct[i]
            else:
                jet = semigroup_jet(model, f, t, x2, 0, spec)
                levels[0] = levels[0] + jet.value
                err[:, 0] += jet.err[:, 0]
        else:
            low = min(order, 1) if (data_c2 and order >= 2 and f.has_h_hessian) else order
            jet = semigroup_jet(model, f, t, x2, low, spec)
            for i in range(low + 1):
                levels[i] = levels[i] + jet.level(i)
                err[:, i] += jet.err[:, i]
            if low < order:
                h, e = semigroup_hess_c2(model, f, t, x2, spec)
                levels[2] = levels[2] + h
                err[:, 2] += e
    if g is not None and t > 0:
        tq_g = _effective(tq, g.field, order)
        rule = _duhamel_rule(tq_g, t)
        weight = g.weight(t - rule.nodes)
        wrule = TimeRule(rule.nodes, rule.weights * weight, rule.gauss * weight, rule.panel, 0.0, t)
        jet = _integrate_jet(model, g.field, x2, order, wrule, spec, 0.0,
                             (0.0, float(t), 0.0, lambda s: g.weight(t - s)))
        for i in range(order + 1):
            levels[i] = levels[i] + jet.level(i)
            err[:, i] += jet.err[:, i]
    levels += [None] * (4 - len(levels))
    return Jet(levels[0], levels[1], levels[2], levels[3], err, engine)


def mild_solution(model, f, g, t, x, tq=None, spec=None):
    """v(t, x) (float for a single point)."""
    v = mild_jet(model, f, g, t, x, 0, tq, spec).value
    return float(v[0]) if np.asarray(x).ndim == 1 else v


def mild_grad(model, f, g, t, x, tq=None, spec=None) -> HVector:
    return make_h_vector(model, _single(mild_jet(model, f, g, t, x, 1, tq, spec).grad, x))


def mild_hess(model, f, g, t, x, tq=None, spec=None) -> np.ndarray:
    return _single(mild_jet(model, f, g, t, x, 2, tq, spec).hess, x)
