"""Empirical H-Holder and H-Zygmund seminorms over a finite sample design.

Every estimate here is a maximum of difference quotients over finitely many
(x, h) pairs, hence a lower bound of the true supremum.  Inequality checks
therefore put these estimates on the small side only.

Maps F are vectorised callables taking an (N, n) array of points and
returning (N,), (N, r), (N, r, r) or (N, r, r, r) values; the target norm is
chosen from the trailing shape (absolute value, H-norm, operator norm of a
symmetric bilinear or trilinear form).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .gaussian import CovarianceModel

OP3_RESTARTS = 64
OP3_ITERATIONS = 60
OP3_SAFETY = 1.05        # inflation applied to power-iteration tensor norms in checks


# ---------------------------------------------------------------------------
# operator norms
# ---------------------------------------------------------------------------

def op_norm2(m) -> np.ndarray:
    """Operator norm of symmetric (..., r, r) matrices via eigvalsh."""
    m = np.asarray(m, dtype=float)
    if m.shape[-1] == 0:
        return np.zeros(m.shape[:-2])
    sym = 0.5 * (m + np.swapaxes(m, -1, -2))
    return np.abs(np.linalg.eigvalsh(sym)).max(axis=-1)


def op_norm3(t, restarts: int = OP3_RESTARTS, iterations: int = OP3_ITERATIONS, seed: int = 7) -> np.ndarray:
    """Lower bound of sup_{|v|=1} |T(v, v, v)| for symmetric (..., r, r, r) tensors.

    Higher-order power iteration from ``restarts`` deterministic random starts
    plus the coordinate axes; the best value found is returned.
    """
    t = np.asarray(t, dtype=float)
    batch = t.shape[:-3]
    r = t.shape[-1]
    if r == 0:
        return np.zeros(batch)
    flat = t.reshape((-1, r, r, r))
    if r == 1:
        return np.abs(flat[:, 0, 0, 0]).reshape(batch)
    rng = np.random.default_rng(seed)
    starts = np.concatenate([np.eye(r), rng.standard_normal((restarts, r))])
    starts /= np.linalg.norm(starts, axis=1, keepdims=True)
    v = np.broadcast_to(starts, (flat.shape[0],) + starts.shape).copy()       # (N, K, r)
    for _ in range(iterations):
        w = np.einsum("nijk,nbj,nbk->nbi", flat, v, v, optimize=True)
        norms = np.linalg.norm(w, axis=2, keepdims=True)
        ok = norms[..., 0] > 0
        v = np.where(ok[..., None], w / np.where(norms > 0, norms, 1.0), v)
    vals = np.abs(np.einsum("nijk,nbi,nbj,nbk->nb", flat, v, v, v, optimize=True))
    return vals.max(axis=1).reshape(batch)


def target_norm(values) -> np.ndarray:
    """Row-wise norm matching the value shape: |.|, |.|_H, ||.||_{L2}, ||.||_{L3}."""
    v = np.asarray(values, dtype=float)
    extra = v.ndim - 1
    if extra == 0:
        return np.abs(v)
    if extra == 1:
        return np.linalg.norm(v, axis=-1)
    if extra == 2:
        return op_norm2(v)
    if extra == 3:
        return op_norm3(v)
    raise ValueError(f"unsupported value rank {extra}")


# ---------------------------------------------------------------------------
# designs
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class SampleDesign:
    """Base points, unit H-directions (whitened) and a decreasing scale ladder.

    A step is ``scale * direction`` so its H-norm equals the scale.
    """

    points: np.ndarray
    directions: np.ndarray
    scales: np.ndarray
    seed: int = 42
    label: str = "design"

    def __post_init__(self):
        p, d, s = self.points, self.directions, self.scales
        if p.ndim != 2 or d.ndim != 2 or s.ndim != 1 or min(p.shape[0], d.shape[0], s.size) == 0:
            raise ValueError("design needs nonempty points, directions and scales")
        if np.any(np.diff(s) >= 0) or np.any(s <= 0):
            raise ValueError("scale ladder must be positive and strictly decreasing")
        if not np.allclose(np.linalg.norm(d, axis=1), 1.0, atol=1e-12):
            raise ValueError("directions must be unit vectors in whitened coordinates")

    @property
    def shape(self) -> tuple[int, int, int]:
        return self.points.shape[0], self.directions.shape[0], self.scales.size

    def steps(self, model: CovarianceModel, multiple: float = 1.0) -> np.ndarray:
        """Ambient steps, shape (D, S, n)."""
        z = multiple * self.scales[None, :, None] * self.directions[:, None, :]
        return model.to_ambient(z)

    def shifted(self, model: CovarianceModel, multiple: float = 1.0) -> np.ndarray:
        """Points x_j + multiple * h_{i,m}, shape (P, D, S, n)."""
        return self.points[:, None, None, :] + self.steps(model, multiple)[None]

    def union(self, other: "SampleDesign") -> "SampleDesign":
        """Design containing both point sets, both direction sets and both ladders."""
        scales = np.unique(np.concatenate([self.scales, other.scales]))[::-1]
        return SampleDesign(np.concatenate([self.points, other.points]),
                            np.concatenate([self.directions, other.directions]),
                            scales, self.seed, f"{self.label}+{other.label}")


def default_design(model: CovarianceModel, n_points: int = 64, n_directions: int = 32,
                   m0: int = 0, m1: int = 10, seed: int = 42,
                   extra_points=None, extra_directions=None) -> SampleDesign:
    """Anchors (0 and +-e_k) plus gamma-samples; whitened basis plus random unit directions.

    Extra points or whitened directions are prepended (they count towards
    the totals) so a design can be made to contain known attaining pairs.
    """
    if n_points < 1 or n_directions < 1 or m1 < m0:
        raise ValueError("design counts must be positive and m1 >= m0")
    n, r = model.dimension, model.rank
    if r == 0:
        raise ValueError("rank-zero covariance has no H-directions")
    rng = np.random.default_rng(seed)
    anchors = [np.zeros(n)]
    for k in range(n):
        e = np.zeros(n)
        e[k] = 1.0
        anchors += [e, -e]
    pts = [np.atleast_2d(np.asarray(extra_points, dtype=float))] if extra_points is not None else []
    pts.append(np.array(anchors))
    pts = np.concatenate(pts)[:n_points]
    if pts.shape[0] < n_points:
        pts = np.concatenate([pts, model.to_ambient(rng.standard_normal((n_points - pts.shape[0], r)))])
    dirs = [np.atleast_2d(np.asarray(extra_directions, dtype=float))] if extra_directions is not None else []
    dirs.append(np.eye(r))
    dirs = np.concatenate(dirs)
    dirs = dirs / np.linalg.norm(dirs, axis=1, keepdims=True)
    dirs = dirs[:n_directions]
    if dirs.shape[0] < n_directions:
        extra = rng.standard_normal((n_directions - dirs.shape[0], r))
        dirs = np.concatenate([dirs, extra / np.linalg.norm(extra, axis=1, keepdims=True)])
    scales = 2.0 ** -np.arange(m0, m1 + 1, dtype=float)
    return SampleDesign(pts, dirs, scales, seed, f"default[{n_points}x{n_directions}x{scales.size}]")


# ---------------------------------------------------------------------------
# estimates
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SeminormEstimate:
    """Largest difference quotient over a design and the pair attaining it."""

    value: float
    witness_x: tuple
    witness_h: tuple          # ambient step
    witness_norm: float       # ||h||_H
    flavor: str               # "holder", "operator-holder", "lipschitz" or "zygmund"
    alpha: float | None
    design: str
    index: tuple = ()         # (point, direction, scale) indices in the design

    def witness(self) -> dict:
        return {"x": list(self.witness_x), "h": list(self.witness_h), "h_norm": self.witness_norm}


def _evaluate(F, pts: np.ndarray):
    flat = pts.reshape(-1, pts.shape[-1])
    out = F(flat)
    multi = isinstance(out, (list, tuple))
    arrays = [np.asarray(v, dtype=float) for v in (out if multi else [out])]
    for v in arrays:
        if v.shape[0] != flat.shape[0]:
            raise ValueError("map returned the wrong number of rows")
    return [v.reshape(pts.shape[:-1] + v.shape[1:]) for v in arrays], multi


@dataclass
class DifferenceTable:
    """Values of F on a design and norms of its first (and second) differences.

    ``first[j, i, m] = ||F(x_j + h_im) - F(x_j)||`` and
    ``second[j, i, m] = ||F(x_j + 2 h_im) - 2 F(x_j + h_im) + F(x_j)||``;
    ``base``, ``one`` and ``two`` keep the raw values.  Holder estimates for
    several exponents reuse the same table.
    """

    design: SampleDesign
    model: CovarianceModel
    base: np.ndarray
    one: np.ndarray
    two: np.ndarray | None
    first: np.ndarray
    second: np.ndarray | None
    flavor_base: str

    def _pick(self, q: np.ndarray, flavor: str, alpha) -> SeminormEstimate:
        idx = np.unravel_index(int(np.argmax(q)), q.shape)
        j, i, m = (int(v) for v in idx)
        h = self.design.steps(self.model)[i, m]
        return SeminormEstimate(float(q[idx]), tuple(float(v) for v in self.design.points[j]),
                                tuple(float(v) for v in h), float(self.design.scales[m]),
                                flavor, alpha, self.design.label, (j, i, m))

    def quotients(self, alpha: float) -> np.ndarray:
        return self.first / self.design.scales[None, None, :] ** alpha

    def holder(self, alpha: float) -> SeminormEstimate:
        if not 0.0 < alpha < 1.0:
            raise ValueError("alpha must lie in (0, 1)")
        return self._pick(self.quotients(alpha), self.flavor_base, alpha)

    def lipschitz(self) -> SeminormEstimate:
        return self._pick(self.quotients(1.0), "lipschitz", 1.0)

    def zygmund(self) -> SeminormEstimate:
        if self.second is None:
            raise ValueError("table was built without second differences")
        q = self.second / self.design.scales[None, None, :]
        return self._pick(q, "zygmund", None)

    def per_scale_witnesses(self, alpha: float | None, zygmund: bool = False) -> list[tuple]:
        """(point, direction, scale) index of the largest quotient at every scale."""
        if zygmund:
            q = self.second / self.design.scales[None, None, :]
        else:
            q = self.quotients(alpha)
        out = []
        for m in range(q.shape[2]):
            j, i = np.unravel_index(int(np.argmax(q[:, :, m])), q.shape[:2])
            out.append((int(j), int(i), m))
        return out

    def sup(self) -> float:
        return float(target_norm(self.base.reshape((-1,) + self.base.shape[1:])).max())


def difference_tables(F, design: SampleDesign, model: CovarianceModel,
                      second: bool = False) -> list[DifferenceTable]:
    """Evaluate F on x, x + h (and x + 2h) for every design pair.

    F may return a list of arrays (for instance values and their error
    estimates from one evaluation); one table is built per array.  Shifted
    points are evaluated once per distinct step length, so on a dyadic
    ladder the x + 2h points reuse the x + h points one rung up.
    """
    bases, _ = _evaluate(F, design.points)
    P, D, S = design.shape
    lengths = design.scales if not second else np.concatenate([design.scales, 2.0 * design.scales])
    uniq = np.unique(lengths)
    pts = design.points[:, None, None, :] + model.to_ambient(
        uniq[None, :, None] * design.directions[:, None, :])[None]
    shifted, _ = _evaluate(F, pts)                              # each (P, D, U, ...)
    i1 = np.searchsorted(uniq, design.scales)
    i2 = np.searchsorted(uniq, 2.0 * design.scales) if second else None
    tables = []
    for base, vals in zip(bases, shifted):
        one = vals[:, :, i1]
        tail = base.shape[1:]
        b = base[:, None, None]
        first = target_norm((one - b).reshape((-1,) + tail)).reshape(P, D, S)
        two = sec = None
        if second:
            two = vals[:, :, i2]
            sec = target_norm((two - 2.0 * one + b).reshape((-1,) + tail)).reshape(P, D, S)
        flavor = "holder" if not tail else "operator-holder"
        tables.append(DifferenceTable(design, model, base, one, two, first, sec, flavor))
    return tables


def difference_table(F, design: SampleDesign, model: CovarianceModel,
                     second: bool = False) -> DifferenceTable:
    """Single-map version of ``difference_tables``."""
    return difference_tables(F, design, model, second)[0]


def pair_error(err: DifferenceTable, index: tuple, zygmund: bool = False) -> float:
    """Propagated absolute error of a difference at a design index.

    ``err`` is a table built from per-point absolute error estimates.
    """
    j, i, m = index
    e = err.base[j] + err.one[j, i, m]
    if zygmund:
        e = err.base[j] + 2.0 * err.one[j, i, m] + err.two[j, i, m]
    return float(e)


def holder_est(F, alpha: float, design: SampleDesign, model: CovarianceModel) -> SeminormEstimate:
    """max ||F(x + h) - F(x)|| / ||h||_H^alpha over the design (a lower bound of [F]_alpha)."""
    return difference_table(F, design, model).holder(alpha)


def zygmund_est(F, design: SampleDesign, model: CovarianceModel) -> SeminormEstimate:
    """max ||F(x + 2h) - 2F(x + h) + F(x)|| / ||h||_H over the design."""
    return difference_table(F, design, model, second=True).zygmund()


def quotient_at(F, x, h, h_norm: float, alpha: float | None = None, zygmund: bool = False) -> float:
    """Recompute a single quotient, e.g. at a reported witness."""
    x = np.asarray(x, dtype=float)[None]
    h = np.asarray(h, dtype=float)[None]
    f0 = np.asarray(F(x), dtype=float)
    f1 = np.asarray(F(x + h), dtype=float)
    if zygmund:
        diff = np.asarray(F(x + 2 * h), dtype=float) - 2 * f1 + f0
        return float(target_norm(diff)[0] / h_norm)
    return float(target_norm(f1 - f0)[0] / h_norm ** (1.0 if alpha is None else alpha))


@dataclass(frozen=True)
class C2AlphaEstimate:
    sup: float
    grad_sup: float
    hess_sup: float
    hess_holder: SeminormEstimate

    @property
    def total(self) -> float:
        return self.sup + self.grad_sup + self.hess_sup + self.hess_holder.value


def c2alpha_norm_est(value, grad, hess, alpha: float, design: SampleDesign,
                     model: CovarianceModel) -> C2AlphaEstimate:
    """Empirical ||u||_{C^{2+alpha}_H}: sup|u|, sup|grad u|_H, sup||D^2 u||, [D^2 u]_alpha."""
    pts = design.points
    sup = float(np.abs(np.asarray(value(pts), dtype=float)).max())
    gsup = float(target_norm(np.asarray(grad(pts), dtype=float)).max())
    table = difference_table(hess, design, model)
    return C2AlphaEstimate(sup, gsup, table.sup(), table.holder(alpha))


def ladder(m0: int, m1: int) -> np.ndarray:
    return 2.0 ** -np.arange(m0, m1 + 1, dtype=float)


def scale_profile(table: DifferenceTable, alpha: float) -> np.ndarray:
    """Per-scale maximum quotient; used to inspect scale consistency."""
    q = table.first / table.design.scales[None, None, :] ** alpha
    return q.max(axis=(0, 1))


__all__ = [
    "SampleDesign", "SeminormEstimate", "DifferenceTable", "C2AlphaEstimate",
    "default_design", "difference_table", "difference_tables", "pair_error", "holder_est", "zygmund_est", "c2alpha_norm_est",
    "op_norm2", "op_norm3", "target_norm", "quotient_at", "ladder", "scale_profile",
    "OP3_SAFETY",
]
