"""Quadrature rules shared by the Gaussian, ridge and time integrators."""
from __future__ import annotations

import zlib
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.special import ndtri
from scipy.stats import qmc

from .errors import SpecInvalid

# Gauss-Kronrod 15 / Gauss 7 on [-1, 1] (QUADPACK qk15), nonnegative half.
_XGK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
_WGK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])


@lru_cache(maxsize=None)
def kronrod15() -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Nodes on [0, 1] with Kronrod weights and embedded Gauss weights (zero off-Gauss nodes)."""
    x = np.concatenate([-_XGK[:-1], _XGK[::-1]])
    wk = np.concatenate([_WGK[:-1], _WGK[::-1]])
    wg = np.zeros(15)
    # Gauss nodes are xgk[1], xgk[3], xgk[5], xgk[7]
    for j, idx in enumerate((1, 3, 5)):
        wg[idx] = _WG[j]
        wg[14 - idx] = _WG[j]
    wg[7] = _WG[3]
    return (x + 1.0) / 2.0, wk / 2.0, wg / 2.0


@lru_cache(maxsize=None)
def gauss_legendre01(n: int) -> tuple[np.ndarray, np.ndarray]:
    x, w = np.polynomial.legendre.leggauss(n)
    return (x + 1.0) / 2.0, w / 2.0


@lru_cache(maxsize=None)
def tanh_sinh01(step: float, tmax: float = 3.0) -> tuple[np.ndarray, np.ndarray]:
    """Tanh-sinh nodes as fractions of [0, 1] and matching weights.

    The rule tolerates integrable algebraic singularities at either end.
    """
    k = np.arange(-int(round(tmax / step)), int(round(tmax / step)) + 1)
    t = k * step
    u = 0.5 * np.pi * np.sinh(t)
    e = np.exp(-2.0 * np.abs(u))
    dist = 2.0 * e / (1.0 + e)  # 1 - |x| without cancellation
    w = step * 0.5 * np.pi * np.cosh(t) / np.cosh(u) ** 2
    frac = np.where(t < 0, dist, 2.0 - dist) / 2.0
    return frac, w / 2.0


@lru_cache(maxsize=None)
def hermite_e(order: int) -> tuple[np.ndarray, np.ndarray]:
    """Probabilists' Gauss-Hermite rule normalised to the standard normal law."""
    x, w = np.polynomial.hermite_e.hermegauss(order)
    return x, w / np.sqrt(2.0 * np.pi)


@dataclass(frozen=True)
class QuadratureSpec:
    """Configuration of the Gaussian integration engines.

    ``gh_order`` points per active direction are used for tensor Gauss-Hermite
    when the rank is at most ``gh_max_dims``; otherwise ``2**qmc_log2``
    scrambled Sobol points seeded from ``seed``.  The ``ridge_*`` fields
    configure the one-dimensional breakpoint-aligned rule used for ridge
    functions.
    """

    gh_order: int = 40
    gh_max_dims: int = 4
    qmc_log2: int = 16
    seed: int = 42
    error_estimate: bool = True
    ridge_reduction: bool = True
    ridge_gl_order: int = 10
    ridge_ts_step: float = 1.0 / 6.0
    ridge_half_width: float = 8.0
    ridge_piece: float = 1.5
    ridge_rel_err: float = 1e-12

    def __post_init__(self):
        if self.gh_order < 2 or self.gh_max_dims < 0 or not 4 <= self.qmc_log2 <= 24:
            raise SpecInvalid(f"invalid Gaussian engine sizes in {self}")
        if self.ridge_gl_order < 2 or not 0.0 < self.ridge_ts_step <= 1.0:
            raise SpecInvalid("ridge rule order/step out of range")
        if self.ridge_half_width < 4.0 or self.ridge_piece <= 0.0:
            raise SpecInvalid("ridge window too small")

    @property
    def fixed_pieces(self) -> int:
        return int(np.ceil(2.0 * self.ridge_half_width / self.ridge_piece))


def substream(seed: int, tag: str) -> np.random.SeedSequence:
    """Deterministic child seed sequence for a named call site."""
    return np.random.SeedSequence(entropy=seed, spawn_key=(zlib.crc32(tag.encode()),))


@lru_cache(maxsize=32)
def _gauss_nodes_cached(rank: int, spec: QuadratureSpec, tag: str, order: int):
    if rank == 0:
        return np.zeros((1, 0)), np.ones(1), "point"
    if rank <= spec.gh_max_dims:
        x, w = hermite_e(order)
        grids = np.meshgrid(*([x] * rank), indexing="ij")
        nodes = np.stack([g.ravel() for g in grids], axis=-1)
        weights = np.ones(nodes.shape[0])
        for wg in np.meshgrid(*([w] * rank), indexing="ij"):
            weights *= wg.ravel()
        keep = weights > 1e-30 * weights.max()
        return nodes[keep], weights[keep], "gauss-hermite"
    sampler = qmc.Sobol(d=rank, scramble=True, seed=np.random.default_rng(substream(spec.seed, tag)))
    u = sampler.random_base2(spec.qmc_log2)
    n = u.shape[0]
    return ndtri(u), np.full(n, 1.0 / n), "sobol"


def gaussian_nodes(rank: int, spec: QuadratureSpec, tag: str = "gaussian",
                   order: int | None = None) -> tuple[np.ndarray, np.ndarray, str]:
    """Nodes ``xi`` (K x rank) and weights for integrating against N(0, I_rank).

    The same (rank, spec, tag) always returns the same nodes, which makes
    differences of two Monte Carlo evaluations share their noise.
    """
    nodes, weights, engine = _gauss_nodes_cached(rank, spec, tag, order or spec.gh_order)
    return nodes, weights, engine
