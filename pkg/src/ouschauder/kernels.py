"""Backend selection for the ridge moment kernel.

The compiled extension is used when it imports; otherwise the NumPy
implementation.  ``OUSCHAUDER_BACKEND=python`` forces the fallback.
Profiles without a kernel code (composed or user callables) always go
through the NumPy path.
"""
from __future__ import annotations

import os

import numpy as np

from . import _ridge_py
from .quadrature import QuadratureSpec, gauss_legendre01, tanh_sinh01

try:  # pragma: no cover - depends on the build
    from . import _ridge as _compiled
except ImportError:  # pragma: no cover
    _compiled = None

BACKEND = "compiled" if _compiled is not None and os.environ.get("OUSCHAUDER_BACKEND") != "python" else "python"


def available_backends() -> list[str]:
    return ["python"] + (["compiled"] if _compiled is not None else [])


def ridge_moments(profile, a, b, spec: QuadratureSpec, nmom: int = 4, backend: str | None = None):
    """Hermite moments ``E[phi(a + b eta) He_k(eta)]`` and their absolute mass.

    Parameters
    ----------
    profile : Profile
        One-dimensional profile; built-in kinds dispatch to the selected backend.
    a, b : array_like, shape (N,)
    spec : QuadratureSpec
    nmom : int
        Number of moments (k = 0 .. nmom-1).
    backend : {"python", "compiled"}, optional
        Override the import-time choice.

    Returns
    -------
    moments, mass : ndarray, shape (N, nmom)
    """
    a = np.ascontiguousarray(np.ravel(a), dtype=float)
    b = np.ascontiguousarray(np.ravel(b), dtype=float)
    gl = gauss_legendre01(spec.ridge_gl_order)
    ts = tanh_sinh01(spec.ridge_ts_step)
    backend = backend or BACKEND
    kind = profile.kernel_kind
    if backend == "compiled" and kind is not None and _compiled is not None:
        return _compiled.ridge_moments(
            int(kind), np.asarray(profile.kernel_params(), dtype=float),
            np.asarray(profile.breakpoints, dtype=float),
            np.asarray(profile.singular, dtype=np.int8),
            a, b, float(spec.ridge_half_width), int(spec.fixed_pieces),
            gl[0], gl[1], ts[0], ts[1], int(nmom), float(profile.scale), _ridge_py.MAX_FIXED)
    if kind is not None:
        params = profile.kernel_params()
        phi = lambda s: _ridge_py.eval_kind(kind, params, s)  # noqa: E731
    else:
        phi = profile
    return _ridge_py.ridge_moments(phi, profile.breakpoints, profile.singular, a, b,
                                   half_width=spec.ridge_half_width, n_fixed=spec.fixed_pieces,
                                   gl=gl, ts=ts, nmom=nmom, scale=profile.scale)
