"""Scalar test fields with exactly known norms, Holder constants and H-derivatives.

All H-derivatives are returned in whitened coordinates (see ``gaussian``):
an H-gradient has shape (..., r) and an H-Hessian (..., r, r).  ``None``
for a declared quantity means "unknown", never an estimate.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import MissingMetadata
from .gaussian import CovarianceModel
from .profiles import Profile


class ScalarField:
    """Base class.  Subclasses set ``kind`` and override what they know."""

    kind = "abstract"
    name = "field"
    sup_norm: float | None = None      # None: unbounded (formula-mode only)
    grad_sup: float | None = None      # sup ||grad_H f||_H when known
    regularity: float = 0.0            # largest alpha with finite Holder data

    def __init__(self, model: CovarianceModel):
        self.model = model

    @property
    def bounded(self) -> bool:
        return self.sup_norm is not None and math.isfinite(self.sup_norm)

    def __call__(self, x):
        raise NotImplementedError

    def exact_holder(self, alpha: float) -> float | None:
        return None

    def holder_norm(self, alpha: float) -> float | None:
        """||f||_inf + [f]_alpha, or None if either part is unknown."""
        hol = self.exact_holder(alpha)
        if hol is None or not self.bounded:
            return None
        return self.sup_norm + hol

    @property
    def has_h_gradient(self) -> bool:
        return False

    def h_gradient(self, x):
        raise MissingMetadata(f"{self.name} has no closed-form H-gradient")

    @property
    def has_h_hessian(self) -> bool:
        return False

    def h_hessian(self, x):
        raise MissingMetadata(f"{self.name} has no closed-form H-Hessian")

    def describe(self) -> dict:
        return {"name": self.name, "kind": self.kind}


class RidgeField(ScalarField):
    """f(x) = phi(<z, x>).

    With w = Q^{1/2} z in whitened coordinates and sigma = |w|, the H-gradient
    is phi'(<z,x>) w and [f]_alpha = [phi]_alpha sigma^alpha.  For z in ker(Q)
    (sigma = 0) the field is constant along H.
    """

    kind = "ridge"

    def __init__(self, model: CovarianceModel, z, profile: Profile, name: str | None = None):
        super().__init__(model)
        z = np.asarray(z, dtype=float)
        if z.shape != (model.dimension,) or not np.any(z):
            raise ValueError("ridge direction must be a nonzero vector of the ambient dimension")
        self.z = z
        self.profile = profile
        self.w = model.h_pairing(z)
        self.sigma = float(np.linalg.norm(self.w))
        # below rounding level the direction is treated as lying in ker(Q)
        if self.sigma <= 1e-12 * float(np.linalg.norm(z)) * math.sqrt(max(model.eigenvalues[0], 0.0) or 1.0):
            self.sigma = 0.0
            self.w = np.zeros_like(self.w)
        self.u = self.w / self.sigma if self.sigma > 0 else np.zeros_like(self.w)
        self.name = name or f"ridge[{profile!r}]"
        self.sup_norm = profile.sup
        if self.sigma == 0.0:
            self.grad_sup = 0.0
            self.regularity = 1.0
        else:
            self.grad_sup = profile.lipschitz * self.sigma if profile.lipschitz is not None else None
            self.regularity = getattr(profile, "power", 1.0)

    def __call__(self, x):
        return self.profile(np.asarray(x, dtype=float) @ self.z)

    def exact_holder(self, alpha):
        if self.sigma == 0.0:
            return 0.0
        ph = self.profile.holder(alpha)
        if ph is None:
            return None
        return ph * self.sigma ** alpha

    @property
    def has_h_gradient(self):
        if self.sigma == 0.0:
            return True
        try:
            self.profile.derivative(1)
        except MissingMetadata:
            return False
        return True

    def h_gradient(self, x):
        x = np.asarray(x, dtype=float)
        if self.sigma == 0.0:
            return np.zeros(x.shape[:-1] + (self.model.rank,))
        d = self.profile.derivative(1)(x @ self.z)
        return d[..., None] * self.w

    @property
    def has_h_hessian(self):
        if self.sigma == 0.0:
            return True
        try:
            self.profile.derivative(2)
        except MissingMetadata:
            return False
        return True

    def h_hessian(self, x):
        x = np.asarray(x, dtype=float)
        if self.sigma == 0.0:
            return np.zeros(x.shape[:-1] + (self.model.rank,) * 2)
        d2 = self.profile.derivative(2)(x @ self.z)
        return d2[..., None, None] * np.outer(self.w, self.w)

    def describe(self):
        return {"name": self.name, "kind": self.kind, "profile": repr(self.profile),
                "direction": [float(v) for v in self.z], "sigma": self.sigma}


class ConstantField(ScalarField):
    kind = "constant"
    regularity = 1.0

    def __init__(self, model, value: float = 1.0, name: str | None = None):
        super().__init__(model)
        self.value = float(value)
        self.name = name or f"constant[{self.value:g}]"
        self.sup_norm = abs(self.value)
        self.grad_sup = 0.0

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        return np.full(x.shape[:-1], self.value)

    def exact_holder(self, alpha):
        return 0.0

    has_h_gradient = property(lambda self: True)
    has_h_hessian = property(lambda self: True)

    def h_gradient(self, x):
        return np.zeros(np.shape(x)[:-1] + (self.model.rank,))

    def h_hessian(self, x):
        return np.zeros(np.shape(x)[:-1] + (self.model.rank,) * 2)


class LinearField(ScalarField):
    """f(x) = <a, x>; unbounded, for formula validation only."""

    kind = "linear"
    regularity = 1.0

    def __init__(self, model, a, name: str | None = None):
        super().__init__(model)
        self.a = np.asarray(a, dtype=float)
        self.w = model.h_pairing(self.a)
        self.name = name or "linear"
        zero = not np.any(self.a)
        self.sup_norm = 0.0 if zero else None
        self.grad_sup = float(np.linalg.norm(self.w))

    def __call__(self, x):
        return np.asarray(x, dtype=float) @ self.a

    def exact_holder(self, alpha):
        return 0.0 if not np.any(self.a) else None

    has_h_gradient = property(lambda self: True)
    has_h_hessian = property(lambda self: True)

    def h_gradient(self, x):
        return np.broadcast_to(self.w, np.shape(x)[:-1] + self.w.shape).copy()

    def h_hessian(self, x):
        return np.zeros(np.shape(x)[:-1] + (self.model.rank,) * 2)


class QuadraticField(ScalarField):
    """f(x) = <a, x>^2; unbounded, for formula validation only."""

    kind = "quadratic"
    regularity = 1.0

    def __init__(self, model, a, name: str | None = None):
        super().__init__(model)
        self.a = np.asarray(a, dtype=float)
        self.w = model.h_pairing(self.a)
        self.name = name or "quadratic"
        self.sup_norm = 0.0 if not np.any(self.a) else None

    def __call__(self, x):
        return (np.asarray(x, dtype=float) @ self.a) ** 2

    def exact_holder(self, alpha):
        return 0.0 if not np.any(self.a) else None

    has_h_gradient = property(lambda self: True)
    has_h_hessian = property(lambda self: True)

    def h_gradient(self, x):
        s = np.asarray(x, dtype=float) @ self.a
        return 2.0 * s[..., None] * self.w

    def h_hessian(self, x):
        s = np.asarray(x, dtype=float) @ self.a
        return np.broadcast_to(2.0 * np.outer(self.w, self.w), s.shape + (self.model.rank,) * 2).copy()


class ProductField(ScalarField):
    """Pointwise product; Holder data is not derived (reported as unknown)."""

    kind = "product"

    def __init__(self, model, first: ScalarField, second: ScalarField, name: str | None = None):
        super().__init__(model)
        self.first, self.second = first, second
        self.name = name or f"product[{first.name},{second.name}]"
        if first.bounded and second.bounded:
            self.sup_norm = first.sup_norm * second.sup_norm
        self.regularity = min(first.regularity, second.regularity)

    def __call__(self, x):
        return self.first(x) * self.second(x)

    @property
    def has_h_gradient(self):
        return self.first.has_h_gradient and self.second.has_h_gradient

    def h_gradient(self, x):
        return (self.first.h_gradient(x) * self.second(x)[..., None]
                + self.second.h_gradient(x) * self.first(x)[..., None])


def make_ridge(model: CovarianceModel, z, profile: Profile, name: str | None = None) -> RidgeField:
    return RidgeField(model, z, profile, name)


def make_linear(model: CovarianceModel, a, name: str | None = None) -> LinearField:
    return LinearField(model, a, name)


def make_quadratic(model: CovarianceModel, a, name: str | None = None) -> QuadraticField:
    return QuadraticField(model, a, name)


def exact_holder(f: ScalarField, alpha: float) -> float | None:
    """Declared [f]_alpha, or None when no closed form is known."""
    if not 0.0 < alpha < 1.0:
        raise ValueError("alpha must lie in (0, 1)")
    return f.exact_holder(alpha)


@dataclass(frozen=True)
class TimeField:
    """g(t, x) = psi(t) f(x) with |psi| <= psi_sup on [0, horizon]."""

    field: ScalarField
    psi: object
    psi_sup: float = 1.0
    name: str = "time-field"

    def __call__(self, t, x):
        return np.asarray(self.psi(t), dtype=float) * self.field(x)

    def weight(self, t):
        return np.asarray(self.psi(t), dtype=float)

    def uniform_holder_norm(self, alpha: float) -> float | None:
        """sup_t ||g(t, .)||_{C^alpha_H} = psi_sup * ||f||_{C^alpha_H}."""
        n = self.field.holder_norm(alpha)
        return None if n is None else self.psi_sup * n


def constant_in_time(field: ScalarField, name: str | None = None) -> TimeField:
    return TimeField(field, lambda t: np.ones_like(np.asarray(t, dtype=float)), 1.0,
                     name or f"{field.name}@const")
