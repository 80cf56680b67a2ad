"""NumPy implementation of the ridge moment kernel.

For each pair (a, b) it computes the Hermite moments

    M_k = E[ phi(a + b * eta) He_k(eta) ],   eta ~ N(0, 1),  k = 0 .. nmom-1

by a piecewise rule on the truncated window [-L, L] in eta.  The window is
cut at a fixed grid and at the mapped profile breakpoints (bp - a) / b.
Pieces touching a singular breakpoint use tanh-sinh, the rest use
Gauss-Legendre.  The compiled kernel in ``_ridge.pyx`` follows the same
partition and node order, so both agree to rounding.
"""
from __future__ import annotations

import math

import numpy as np

from .profiles import KIND_ABS_CLIP_POW, KIND_GAUSS_BUMP, KIND_SINE

_INV_SQRT_2PI = 1.0 / math.sqrt(2.0 * math.pi)
MAX_FIXED = 96


def eval_kind(kind: int, params, s):
    """Evaluate a built-in profile from its kernel code and parameter tuple."""
    s = np.asarray(s, dtype=float)
    if kind == KIND_ABS_CLIP_POW:
        amp, p, clip = params
        return amp * np.minimum(np.abs(s), clip) ** p
    if kind == KIND_SINE:
        amp, omega, phase = params
        return amp * np.sin(omega * s + phase)
    if kind == KIND_GAUSS_BUMP:
        amp, d = params
        d = int(d)
        h0, h1 = np.ones_like(s), s
        if d == 0:
            h = h0
        else:
            for k in range(1, d):
                h0, h1 = h1, s * h1 - k * h0
            h = h1
        return amp * (-1) ** d * h * np.exp(-0.5 * s * s)
    raise ValueError(f"unknown profile kind {kind}")


def fixed_counts(b, n_fixed, scale, max_fixed):
    """Per-row number of regular grid pieces; finer when b stretches phi's features."""
    if not np.isfinite(scale):
        return np.full(b.shape, n_fixed, dtype=np.int64)
    m = np.ceil(n_fixed * np.maximum(1.0, b / scale))
    return np.minimum(m, max_fixed).astype(np.int64)


def _partition(a, b, bps, sing, half_width, counts):
    """Sorted piece boundaries (N, P+1) and a per-piece singular-end mask (N, P)."""
    n = a.shape[0]
    j = np.arange(int(counts.max()) + 1)
    grid = -half_width + 2.0 * half_width * np.minimum(j[None, :], counts[:, None]) / counts[:, None]
    if len(bps):
        mapped = (np.asarray(bps)[None, :] - a[:, None]) / b[:, None]
        mapped = np.clip(mapped, -half_width, half_width)
        flags = np.broadcast_to(np.asarray(sing, dtype=bool), mapped.shape)
        # interior grid cuts within half a piece of a singular point are moved
        # onto it, so no regular piece ends next to a singularity
        ell = (2.0 * half_width / counts)[:, None]
        inner = (j[None, :] > 0) & (j[None, :] < counts[:, None])
        grid_flags = np.zeros(grid.shape, dtype=bool)
        for q in np.flatnonzero(np.asarray(sing, dtype=bool)):
            e = mapped[:, q:q + 1]
            near = inner & (np.abs(grid - e) < 0.5 * ell) & (np.abs(e) < half_width)
            grid = np.where(near, e, grid)
            grid_flags |= near
        cuts = np.concatenate([grid, mapped], axis=1)
        cflags = np.concatenate([grid_flags, flags], axis=1)
        order = np.argsort(cuts, axis=1, kind="stable")
        cuts = np.take_along_axis(cuts, order, axis=1)
        cflags = np.take_along_axis(cflags, order, axis=1)
        # a singular point clipped onto the window edge is outside the window
        cflags &= np.abs(cuts) < half_width
    else:
        cuts = grid
        cflags = np.zeros_like(cuts, dtype=bool)
    singular_piece = cflags[:, :-1] | cflags[:, 1:]
    return cuts, singular_piece


def _accumulate(phi, a, b, rows, lo, hi, frac, w, nmom, out, mass):
    if rows.size == 0:
        return
    ell = hi - lo
    eta = lo[:, None] + ell[:, None] * frac[None, :]
    val = phi(a[rows, None] + b[rows, None] * eta)
    base = val * np.exp(-0.5 * eta * eta) * (w[None, :] * ell[:, None] * _INV_SQRT_2PI)
    he_prev, he = np.ones_like(eta), eta
    for k in range(nmom):
        if k == 0:
            term = base
        elif k == 1:
            term = base * eta
        else:
            he_prev, he = he, eta * he - (k - 1) * he_prev
            term = base * he
        out[:, k] += np.bincount(rows, weights=term.sum(axis=1), minlength=out.shape[0])
        mass[:, k] += np.bincount(rows, weights=np.abs(term).sum(axis=1), minlength=out.shape[0])


def ridge_moments(phi, bps, sing, a, b, *, half_width, n_fixed, gl, ts, nmom=4,
                  scale=np.inf, max_fixed=MAX_FIXED):
    """Hermite moments of ``phi(a + b eta)``.

    Parameters
    ----------
    phi : callable
        Vectorised profile.
    bps, sing : sequences
        Breakpoints of ``phi`` and whether each one is an algebraic singularity.
    a, b : ndarray, shape (N,)
        Shift and scale; rows with ``b == 0`` return ``(phi(a), 0, 0, ...)``.
    scale : float
        Feature length of ``phi``; rows with ``b > scale`` get proportionally
        more regular pieces, up to ``max_fixed``.
    gl, ts : tuple of ndarray
        Node fractions on [0, 1] and weights of the regular and singular rules.

    Returns
    -------
    moments, mass : ndarray, shape (N, nmom)
        The moments and the integral of their absolute integrand.
    """
    a = np.ascontiguousarray(a, dtype=float)
    b = np.ascontiguousarray(b, dtype=float)
    n = a.shape[0]
    out = np.zeros((n, nmom))
    mass = np.zeros((n, nmom))
    flat = b <= 0.0
    if flat.any():
        v = phi(a[flat])
        out[flat, 0] = v
        mass[flat, 0] = np.abs(v)
    live = np.flatnonzero(~flat)
    if live.size == 0:
        return out, mass
    al, bl = a[live], b[live]
    counts = fixed_counts(bl, n_fixed, scale, max_fixed)
    cuts, singular_piece = _partition(al, bl, bps, sing, half_width, counts)
    lo, hi = cuts[:, :-1], cuts[:, 1:]
    sub_out = np.zeros((live.size, nmom))
    sub_mass = np.zeros((live.size, nmom))
    keep = hi > lo
    for mask, (frac, w) in ((keep & ~singular_piece, gl), (keep & singular_piece, ts)):
        rows, cols = np.nonzero(mask)
        _accumulate(phi, al, bl, rows, lo[rows, cols], hi[rows, cols], frac, w, nmom, sub_out, sub_mass)
    out[live] = sub_out
    mass[live] = sub_mass
    return out, mass
