"""Centered Gaussian measures N(0, Q) with possibly singular Q.

Coordinates: the columns of ``basis`` (n x r) are an orthonormal basis of the
Cameron-Martin space H = Q^{1/2}(R^n), so an H-vector is described by its
whitened coordinates z in R^r and ||h||_H = |z|.  Under gamma the whitened
coordinates of a sample are standard normal.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy import integrate, optimize

from .errors import NegativeEigenvalue, NotInCameronMartin, NotSymmetric
from .quadrature import QuadratureSpec, gaussian_nodes

ZERO_THRESHOLD = 1e-12
SYMMETRY_TOL = 1e-10
NEGATIVE_TOL = 1e-10
RANGE_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class CovarianceModel:
    """Eigendecomposition of a positive-semidefinite covariance matrix.

    Attributes
    ----------
    matrix : ndarray (n, n)
        The (symmetrised) covariance Q.
    eigenvalues : ndarray (n,)
        Sorted descending, clamped at zero.
    eigenvectors : ndarray (n, n)
        Orthonormal columns; each column's first nonzero entry is positive.
    rank : int
        Number of eigenvalues above ``zero_threshold * eigenvalues[0]``.
    """

    matrix: np.ndarray
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    rank: int
    zero_threshold: float = ZERO_THRESHOLD
    basis: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        lam = self.eigenvalues[: self.rank]
        object.__setattr__(self, "basis", self.eigenvectors[:, : self.rank] * np.sqrt(lam))

    @property
    def dimension(self) -> int:
        return self.matrix.shape[0]

    @property
    def range_vectors(self) -> np.ndarray:
        return self.eigenvectors[:, : self.rank]

    @property
    def kernel_vectors(self) -> np.ndarray:
        return self.eigenvectors[:, self.rank:]

    def whiten(self, x) -> np.ndarray:
        """Whitened coordinates of the projection of x onto range(Q); shape (..., r)."""
        x = np.asarray(x, dtype=float)
        return (x @ self.range_vectors) / np.sqrt(self.eigenvalues[: self.rank])

    def to_ambient(self, z) -> np.ndarray:
        """Ambient vector Q^{1/2} z of whitened coordinates z; shape (..., n)."""
        return np.asarray(z, dtype=float) @ self.basis.T

    def h_pairing(self, a) -> np.ndarray:
        """Whitened coordinates of the H-gradient of x -> <a, x>, i.e. of Q a."""
        return np.asarray(a, dtype=float) @ self.basis

    def reconstruct(self) -> np.ndarray:
        v, lam = self.eigenvectors, self.eigenvalues
        return (v * lam) @ v.T


def _fix_signs(vecs: np.ndarray) -> np.ndarray:
    vecs = vecs.copy()
    for j in range(vecs.shape[1]):
        col = vecs[:, j]
        nz = np.flatnonzero(np.abs(col) > 1e-12)
        if nz.size and col[nz[0]] < 0:
            vecs[:, j] = -col
    return vecs


def build_covariance(matrix, zero_threshold: float = ZERO_THRESHOLD) -> CovarianceModel:
    """Eigendecompose a symmetric PSD matrix.

    Raises
    ------
    NotSymmetric
        If ``|Q - Q^T|`` exceeds 1e-10 (relative to max(1, |Q|)).
    NegativeEigenvalue
        If an eigenvalue is below -1e-10; smaller negatives are clamped to 0.
    """
    q = np.atleast_2d(np.asarray(matrix, dtype=float))
    if q.ndim != 2 or q.shape[0] != q.shape[1]:
        raise NotSymmetric(f"covariance must be square, got shape {q.shape}")
    scale = max(1.0, float(np.abs(q).max()))
    if np.abs(q - q.T).max() > SYMMETRY_TOL * scale:
        raise NotSymmetric("covariance matrix is not symmetric")
    q = 0.5 * (q + q.T)
    lam, vecs = np.linalg.eigh(q)
    order = np.argsort(-lam, kind="stable")
    lam, vecs = lam[order], vecs[:, order]
    if lam.size and lam[-1] < -NEGATIVE_TOL * scale:
        raise NegativeEigenvalue(f"eigenvalue {lam[-1]:.3e} is negative")
    lam = np.maximum(lam, 0.0)
    top = lam[0] if lam.size else 0.0
    rank = int(np.sum(lam > zero_threshold * top)) if top > 0 else 0
    lam[rank:] = 0.0
    return CovarianceModel(q, lam, _fix_signs(vecs), rank, zero_threshold)


@dataclass(frozen=True)
class HVector:
    """A Cameron-Martin vector (or a batch of them).

    ``z`` holds the whitened coordinates, ``h = Q^{1/2} z`` the ambient ones and
    ``norm`` equals |z|.
    """

    h: np.ndarray
    z: np.ndarray
    norm: np.ndarray

    def hat(self, model: CovarianceModel, x) -> np.ndarray:
        """The linear functional x -> <Q^{-1/2} h, x> on range(Q)."""
        return model.whiten(x) @ self.z


def make_h_vector(model: CovarianceModel, z) -> HVector:
    """H-vector from whitened coordinates z (shape (r,) or (N, r))."""
    z = np.asarray(z, dtype=float)
    if z.shape[-1] != model.rank:
        raise ValueError(f"expected {model.rank} whitened coordinates, got {z.shape[-1]}")
    return HVector(model.to_ambient(z), z, np.linalg.norm(z, axis=-1))


def h_vector_from_ambient(model: CovarianceModel, h) -> HVector:
    """H-vector from ambient coordinates; rejects components in ker(Q)."""
    h = np.asarray(h, dtype=float)
    outside = h @ model.kernel_vectors
    size = float(np.linalg.norm(h))
    if size > 0 and float(np.linalg.norm(outside)) > RANGE_TOL * size:
        raise NotInCameronMartin("vector has a component in ker(Q)")
    return make_h_vector(model, model.whiten(h))


@lru_cache(maxsize=None)
def kp_constant(p: float) -> float:
    """(E|xi|^p)^{1/p} for a standard normal xi, by adaptive quadrature."""
    if p < 1:
        raise ValueError("k_p is defined here for p >= 1")
    val, _ = integrate.quad(lambda s: s ** p * math.exp(-0.5 * s * s), 0.0, np.inf,
                            epsabs=0.0, epsrel=1e-13, limit=200)
    return (2.0 * val / math.sqrt(2.0 * math.pi)) ** (1.0 / p)


def sqrt_one_minus_e2t(t):
    """sqrt(1 - e^{-2t}) without cancellation for small t."""
    return np.sqrt(-np.expm1(-2.0 * np.asarray(t, dtype=float)))


def c_factor(t):
    """Smoothing factor c(t) = e^{-t} / sqrt(1 - e^{-2t}), t > 0."""
    t = np.asarray(t, dtype=float)
    if np.any(t <= 0):
        raise ValueError("c(t) needs t > 0")
    out = np.exp(-t) / sqrt_one_minus_e2t(t)
    return float(out) if out.ndim == 0 else out


@lru_cache(maxsize=None)
def c0_numeric() -> float:
    """Largest sampled value of t^{1/2} c(t) on a log grid refined towards 0."""
    t = np.geomspace(1e-14, 20.0, 4001)
    v = np.sqrt(t) * c_factor(t)
    i = int(np.argmax(v))
    lo, hi = t[max(i - 1, 0)], t[min(i + 1, t.size - 1)]
    res = optimize.minimize_scalar(lambda s: -math.sqrt(s) * c_factor(s), bounds=(lo, hi), method="bounded")
    return max(float(v[i]), -float(res.fun))


def c0_constant() -> float:
    """sup_{t>0} t^{1/2} c(t).

    The supremum is the limit 1/sqrt(2) as t -> 0 and is not attained; the
    returned value is max(numeric maximum, 1/sqrt(2)).
    """
    return max(c0_numeric(), 1.0 / math.sqrt(2.0))


def c1_constant() -> float:
    """(3 + k_3^3) c0^3."""
    return (3.0 + kp_constant(3.0) ** 3) * c0_constant() ** 3


def integrate_gaussian(model: CovarianceModel, g, spec: QuadratureSpec | None = None,
                       tag: str = "integrate", return_error: bool = False):
    """Approximate the integral of g against N(0, Q).

    Tensor Gauss-Hermite on the active directions when rank <= gh_max_dims,
    scrambled Sobol otherwise; the kernel of Q carries the point mass at 0.

    Parameters
    ----------
    g : callable
        Maps an (K, n) array of points to (K,) values.
    return_error : bool
        Also return an error estimate: the difference to a rule of half the
        order (Gauss-Hermite) or the sample standard error (Sobol).
    """
    spec = spec or QuadratureSpec()
    xi, w, engine = gaussian_nodes(model.rank, spec, tag)
    vals = np.asarray(g(model.to_ambient(xi)), dtype=float)
    est = float(w @ vals)
    if not return_error:
        return est
    if engine == "gauss-hermite":
        xi2, w2, _ = gaussian_nodes(model.rank, spec, tag, order=max(2, spec.gh_order // 2))
        err = abs(est - float(w2 @ np.asarray(g(model.to_ambient(xi2)), dtype=float)))
    elif engine == "sobol":
        err = float(np.std(vals) / math.sqrt(vals.size))
    else:
        err = 0.0
    return est, err
