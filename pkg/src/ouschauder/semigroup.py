"""Mehler semigroup T(t) and its H-derivatives of order 1-3.

Bounded data use the Cameron-Martin weight representation

    grad_i = c(t)   E[ f(P) xi_i ]
    hess_ij = c(t)^2 E[ f(P) (xi_i xi_j - delta_ij) ]
    d3_ijk  = c(t)^3 E[ f(P) (xi_i xi_j xi_k - xi_i delta_jk - xi_j delta_ik - xi_k delta_ij) ]

with P = e^{-t} x + sqrt(1 - e^{-2t}) Q^{1/2} xi and xi ~ N(0, I_r) the
whitened noise.  C^1_H data may instead use the gradient representation
(``*_c1``), which stays valid at t = 0 for the first derivative.

Ridge fields phi(<z, x>) reduce every expectation to the one-dimensional
Hermite moments M_k = E[phi(a + b eta) He_k(eta)] with a = e^{-t}<z, x>,
b = sqrt(1 - e^{-2t}) |Q^{1/2} z|: the k-th derivative is c(t)^k M_k u^{(x)k}
with u the unit H-direction of the ridge.  Other fields use the
tensor Gauss-Hermite / Sobol engine of ``gaussian``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import permutations

import numpy as np
from scipy.special import erfc

from .errors import MissingMetadata
from .fields import ConstantField, RidgeField, ScalarField
from .gaussian import CovarianceModel, HVector, make_h_vector, sqrt_one_minus_e2t
from .kernels import ridge_moments
from .profiles import CallableProfile
from .quadrature import QuadratureSpec, gaussian_nodes

_CHUNK_POINTS = 400_000


@dataclass
class Jet:
    """Values and H-derivatives of T(t)f at a batch of points.

    ``err`` has one column per computed level and holds absolute error
    estimates in the norm of that level (|.|, |.|_H, operator norm).
    """

    value: np.ndarray | None
    grad: np.ndarray | None
    hess: np.ndarray | None
    d3: np.ndarray | None
    err: np.ndarray
    engine: str

    def level(self, k: int) -> np.ndarray:
        return (self.value, self.grad, self.hess, self.d3)[k]


def _prepare(model: CovarianceModel, t, x):
    x = np.asarray(x, dtype=float)
    single = x.ndim == 1
    x2 = np.atleast_2d(x)
    if x2.shape[-1] != model.dimension:
        raise ValueError(f"points must have {model.dimension} coordinates")
    t = np.broadcast_to(np.asarray(t, dtype=float), (x2.shape[0],)).copy()
    if np.any(t < 0) or not np.all(np.isfinite(t)):
        raise ValueError("time must be finite and nonnegative")
    return x2, t, single


def _c_of(t):
    with np.errstate(divide="ignore"):
        return np.exp(-t) / sqrt_one_minus_e2t(t)


def _outer_powers(u, order):
    """u, u (x) u, u (x) u (x) u for a unit vector u."""
    o2 = np.outer(u, u)
    return u, o2, np.einsum("ij,k->ijk", o2, u) if order >= 3 else None


def _tail_bound(sup, k, half_width):
    # crude bound for E[|phi| |He_k|; |eta| > L]
    if not math.isfinite(sup):
        return 0.0
    return sup * erfc(half_width / math.sqrt(2.0)) * (1.0 + half_width ** max(k, 1))


def _ridge_jet(model, f: RidgeField, t, x, order, spec):
    s = x @ f.z
    a = np.exp(-t) * s
    b = sqrt_one_minus_e2t(t) * f.sigma
    n = x.shape[0]
    r = model.rank
    mom, mass = ridge_moments(f.profile, a, b, spec, nmom=order + 1)
    c = _c_of(t)
    err = np.empty((n, order + 1))
    for k in range(order + 1):
        ck = c ** k if k else np.ones(n)
        err[:, k] = ck * (spec.ridge_rel_err * mass[:, k] + _tail_bound(f.profile.sup, k, spec.ridge_half_width))
    if f.sigma == 0.0:
        err[:, 1:] = 0.0
    grad = hess = d3 = None
    u, uu, uuu = _outer_powers(f.u, order)
    if order >= 1:
        grad = (c * mom[:, 1])[:, None] * u if f.sigma > 0 else np.zeros((n, r))
    if order >= 2:
        hess = (c ** 2 * mom[:, 2])[:, None, None] * uu if f.sigma > 0 else np.zeros((n, r, r))
    if order >= 3:
        d3 = (c ** 3 * mom[:, 3])[:, None, None, None] * uuu if f.sigma > 0 else np.zeros((n, r, r, r))
    return Jet(mom[:, 0], grad, hess, d3, err, "ridge")


def _moment_sums(F, w, xi, order):
    """E[F], E[F xi_i], E[F xi_i xi_j], E[F xi_i xi_j xi_k] for rows of F."""
    fw = F * w
    out = [fw.sum(axis=1)]
    if order >= 1:
        out.append(fw @ xi)
    if order >= 2:
        out.append(np.einsum("nk,ki,kj->nij", fw, xi, xi, optimize=True))
    if order >= 3:
        out.append(np.einsum("nk,ki,kj,kl->nijl", fw, xi, xi, xi, optimize=True))
    return out


def _weights_to_jet(sums, c, order, r):
    eye = np.eye(r)
    value = sums[0]
    grad = hess = d3 = None
    if order >= 1:
        grad = c[:, None] * sums[1]
    if order >= 2:
        hess = c[:, None, None] ** 2 * (sums[2] - value[:, None, None] * eye)
    if order >= 3:
        g = sums[1]
        corr = (np.einsum("ni,jk->nijk", g, eye) + np.einsum("nj,ik->nijk", g, eye)
                + np.einsum("nk,ij->nijk", g, eye))
        d3 = c[:, None, None, None] ** 3 * (sums[3] - corr)
    return [value, grad, hess, d3][: order + 1]


def _generic_levels(model, f, t, x, order, spec, rule_order, tag):
    xi, w, engine = gaussian_nodes(model.rank, spec, tag, order=rule_order)
    noise = model.to_ambient(xi)
    st = sqrt_one_minus_e2t(t)
    c = _c_of(t)
    n = x.shape[0]
    step = max(1, _CHUNK_POINTS // max(1, xi.shape[0]))
    levels = [[] for _ in range(order + 1)]
    for lo in range(0, n, step):
        sl = slice(lo, min(n, lo + step))
        pts = np.exp(-t[sl])[:, None, None] * x[sl, None, :] + st[sl, None, None] * noise[None]
        F = np.asarray(f(pts), dtype=float)
        for k, v in enumerate(_weights_to_jet(_moment_sums(F, w, xi, order), c[sl], order, model.rank)):
            levels[k].append(v)
    return [np.concatenate(v) for v in levels], engine


def _level_norm(v):
    return np.abs(v) if v.ndim == 1 else np.sqrt((v.reshape(v.shape[0], -1) ** 2).sum(axis=1))


def _generic_jet(model, f, t, x, order, spec, tag):
    levels, engine = _generic_levels(model, f, t, x, order, spec, spec.gh_order, tag)
    n = x.shape[0]
    err = np.zeros((n, order + 1))
    if spec.error_estimate and engine == "gauss-hermite":
        coarse, _ = _generic_levels(model, f, t, x, order, spec, max(2, spec.gh_order // 2), tag)
        for k in range(order + 1):
            err[:, k] = _level_norm(levels[k] - coarse[k])
    elif spec.error_estimate and engine == "sobol":
        # half-sample disagreement as a noise proxy
        xi, w, _ = gaussian_nodes(model.rank, spec, tag)
        for k in range(order + 1):
            err[:, k] = _level_norm(levels[k]) * 2.0 / math.sqrt(xi.shape[0])
    levels += [None] * (4 - len(levels))
    return Jet(levels[0], levels[1], levels[2], levels[3], err, engine)


def semigroup_jet(model: CovarianceModel, f: ScalarField, t, x, order: int = 0,
                  spec: QuadratureSpec | None = None, tag: str = "semigroup") -> Jet:
    """T(t)f and its first ``order`` H-derivatives at the rows of x.

    ``t`` is a scalar or one time per row.  Rows with t = 0 return f(x) and
    are only allowed for ``order == 0``.
    """
    spec = spec or QuadratureSpec()
    if not 0 <= order <= 3:
        raise ValueError("order must be 0..3")
    x2, t, _ = _prepare(model, t, x)
    zero = t == 0
    if order > 0 and zero.any():
        raise ValueError("H-derivatives of T(t)f for bounded f need t > 0")
    r = model.rank
    if isinstance(f, ConstantField):
        n = x2.shape[0]
        levels = [np.full(n, f.value), np.zeros((n, r)), np.zeros((n, r, r)), np.zeros((n, r, r, r))]
        levels = levels[: order + 1] + [None] * (3 - order)
        return Jet(*levels, err=np.zeros((n, order + 1)), engine="exact")
    if isinstance(f, RidgeField) and spec.ridge_reduction:
        jet = _ridge_jet(model, f, t, x2, order, spec)
    else:
        jet = _generic_jet(model, f, t, x2, order, spec, tag)
    if zero.any():
        jet.value[zero] = f(x2[zero])
        jet.err[zero, 0] = 0.0
    return jet


def semigroup_jet_c1(model: CovarianceModel, f: ScalarField, t, x, order: int = 1,
                     spec: QuadratureSpec | None = None, tag: str = "semigroup-c1") -> Jet:
    """H-derivatives of T(t)f from the gradient representation (C^1_H data).

    grad = e^{-t} E[grad_H f(P)], hess_ij = e^{-t} c(t) E[(grad_H f(P))_i xi_j],
    d3_ijk = e^{-t} c(t)^2 E[(grad_H f(P))_i (xi_j xi_k - delta_jk)].
    The first derivative is valid at t = 0; higher ones need t > 0.
    """
    spec = spec or QuadratureSpec()
    if not 1 <= order <= 3:
        raise ValueError("order must be 1..3")
    if not f.has_h_gradient:
        raise MissingMetadata(f"{f.name} carries no closed-form H-gradient")
    x2, t, _ = _prepare(model, t, x)
    zero = t == 0
    if order > 1 and zero.any():
        raise ValueError("second and third derivatives need t > 0")
    n, r = x2.shape[0], model.rank
    et = np.exp(-t)
    c = _c_of(t)
    err = np.zeros((n, order + 1))
    grad = hess = d3 = None
    if isinstance(f, RidgeField) and spec.ridge_reduction:
        if f.sigma == 0.0:
            grad, hess, d3 = np.zeros((n, r)), np.zeros((n, r, r)), np.zeros((n, r, r, r))
        else:
            dprof = f.profile.derivative(1)
            s = x2 @ f.z
            mom, mass = ridge_moments(dprof, et * s, sqrt_one_minus_e2t(t) * f.sigma, spec, nmom=order)
            u, uu, uuu = _outer_powers(f.u, order)
            grad = (et * mom[:, 0] * f.sigma)[:, None] * u
            err[:, 1] = et * f.sigma * spec.ridge_rel_err * mass[:, 0]
            if order >= 2:
                hess = (et * c * f.sigma * mom[:, 1])[:, None, None] * uu
                err[:, 2] = et * c * f.sigma * spec.ridge_rel_err * mass[:, 1]
            if order >= 3:
                d3 = (et * c ** 2 * f.sigma * mom[:, 2])[:, None, None, None] * uuu
                err[:, 3] = et * c ** 2 * f.sigma * spec.ridge_rel_err * mass[:, 2]
        engine = "ridge"
    else:
        xi, w, engine = gaussian_nodes(model.rank, spec, tag)
        noise = model.to_ambient(xi)
        st = sqrt_one_minus_e2t(t)
        grads, hesses, d3s = [], [], []
        step = max(1, _CHUNK_POINTS // max(1, xi.shape[0]))
        for lo in range(0, n, step):
            sl = slice(lo, min(n, lo + step))
            pts = et[sl, None, None] * x2[sl, None, :] + st[sl, None, None] * noise[None]
            G = f.h_gradient(pts) * w[None, :, None]
            grads.append(et[sl, None] * G.sum(axis=1))
            if order >= 2:
                h = np.einsum("nki,kj->nij", G, xi)
                hesses.append((et[sl] * c[sl])[:, None, None] * 0.5 * (h + np.swapaxes(h, 1, 2)))
            if order >= 3:
                raw = np.einsum("nki,kj,kl->nijl", G, xi, xi) - np.einsum("ni,jl->nijl", G.sum(axis=1), np.eye(r))
                sym = sum(np.transpose(raw, (0,) + tuple(1 + p for p in perm)) for perm in permutations(range(3))) / 6.0
                d3s.append((et[sl] * c[sl] ** 2)[:, None, None, None] * sym)
        grad = np.concatenate(grads)
        hess = np.concatenate(hesses) if order >= 2 else None
        d3 = np.concatenate(d3s) if order >= 3 else None
    if zero.any():
        grad[zero] = f.h_gradient(x2[zero])
    return Jet(None, grad, hess, d3, err, engine)


def semigroup_hess_c2(model: CovarianceModel, f: ScalarField, t, x,
                      spec: QuadratureSpec | None = None, tag: str = "semigroup-c2"):
    """D^2_H T(t)f = e^{-2t} T(t)[D^2_H f] for data with a closed-form H-Hessian.

    Valid for all t >= 0; returns (hess (N, r, r), err (N,)).
    """
    spec = spec or QuadratureSpec()
    if not f.has_h_hessian:
        raise MissingMetadata(f"{f.name} carries no closed-form H-Hessian")
    x2, t, _ = _prepare(model, t, x)
    n, r = x2.shape[0], model.rank
    e2 = np.exp(-2.0 * t)
    if isinstance(f, RidgeField) and spec.ridge_reduction:
        if f.sigma == 0.0:
            return np.zeros((n, r, r)), np.zeros(n)
        d2 = f.profile.derivative(2)
        mom, mass = ridge_moments(d2, np.exp(-t) * (x2 @ f.z), sqrt_one_minus_e2t(t) * f.sigma, spec, nmom=1)
        scale = e2 * f.sigma ** 2
        return (scale * mom[:, 0])[:, None, None] * np.outer(f.u, f.u), scale * spec.ridge_rel_err * mass[:, 0]
    xi, w, _ = gaussian_nodes(model.rank, spec, tag)
    noise = model.to_ambient(xi)
    pts = np.exp(-t)[:, None, None] * x2[:, None, :] + sqrt_one_minus_e2t(t)[:, None, None] * noise[None]
    H = np.einsum("nkij,k->nij", f.h_hessian(pts), w)
    return e2[:, None, None] * H, np.zeros(n)


def _single(v, single):
    return v[0] if single else v


def apply_T(model, f, t, x, spec=None):
    """T(t)f(x); a float for a single point, an array for a batch."""
    x2, _, single = _prepare(model, t, x)
    v = semigroup_jet(model, f, t, x2, 0, spec).value
    return float(v[0]) if single else v


def grad_H_T(model, f, t, x, spec=None) -> HVector:
    """H-gradient of T(t)f at x as an HVector (batched when x is 2-d)."""
    x2, _, single = _prepare(model, t, x)
    g = semigroup_jet(model, f, t, x2, 1, spec).grad
    return make_h_vector(model, _single(g, single))


def hess_H_T(model, f, t, x, spec=None) -> np.ndarray:
    """D^2_H T(t)f(x) as an r x r matrix in whitened coordinates."""
    x2, _, single = _prepare(model, t, x)
    return _single(semigroup_jet(model, f, t, x2, 2, spec).hess, single)


def d3_H_T(model, f, t, x, spec=None) -> np.ndarray:
    """D^3_H T(t)f(x) as an r x r x r tensor in whitened coordinates."""
    x2, _, single = _prepare(model, t, x)
    return _single(semigroup_jet(model, f, t, x2, 3, spec).d3, single)


def grad_H_T_c1(model, f, t, x, spec=None) -> HVector:
    x2, _, single = _prepare(model, t, x)
    return make_h_vector(model, _single(semigroup_jet_c1(model, f, t, x2, 1, spec).grad, single))


def hess_H_T_c1(model, f, t, x, spec=None) -> np.ndarray:
    x2, _, single = _prepare(model, t, x)
    return _single(semigroup_jet_c1(model, f, t, x2, 2, spec).hess, single)


def d3_H_T_c1(model, f, t, x, spec=None) -> np.ndarray:
    x2, _, single = _prepare(model, t, x)
    return _single(semigroup_jet_c1(model, f, t, x2, 3, spec).d3, single)


def semigroup_profile(f: RidgeField, s: float, spec: QuadratureSpec | None = None) -> CallableProfile:
    """Profile psi with T(s)f = psi(<z, .>) for a ridge f.

    psi(r) = E[phi(e^{-s} r + sqrt(1 - e^{-2s}) sigma eta)], evaluated through
    the ridge kernel; used to compose semigroups in consistency checks.
    """
    spec = spec or QuadratureSpec()
    if s <= 0:
        raise ValueError("s must be positive")
    es = math.exp(-s)
    b = float(sqrt_one_minus_e2t(s)) * f.sigma
    prof = f.profile

    def psi(r):
        r = np.asarray(r, dtype=float)
        flat = r.ravel()
        mom, _ = ridge_moments(prof, es * flat, np.full(flat.shape, b), spec, nmom=1)
        return mom[:, 0].reshape(r.shape)

    bps = tuple(bp / es for bp in prof.breakpoints)
    width = b / es if b > 0 else prof.scale
    return CallableProfile(psi, bps, (False,) * len(bps), sup=prof.sup,
                           name=f"T({s:g})[{prof!r}]", scale=min(prof.scale / es, max(width, 1e-3)))
