"""Universal constants and the constants of the Holder smoothing estimates.

For alpha in (0, 1):

* C1(alpha) = sup_t t^{(1-alpha)/2} (c(t) t^{alpha/2} / (alpha + 1) + t^{(alpha-1)/2})
            = c0 / (alpha + 1) + 1,
* C2(alpha) = sup_t t^{1-alpha/2} c(t/2) C1(alpha) (t/2)^{-(1-alpha)/2}
            = 2^{1-alpha/2} c0 C1(alpha),
* C3(alpha) = sup_t t^{3/2-alpha/2} 2 c(t/2)^2 C1(alpha) (t/2)^{-(1-alpha)/2}
            = 2^{3/2-alpha/2} C1(alpha)        (using c0^2 = 1/2).

Each supremum is approached as t -> 0 and is not attained; the numeric
maximisation over a log grid is reported next to the closed reduction and
the larger of the two is used.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np
from scipy.special import gamma as gamma_fn

from ..gaussian import c0_constant, c1_constant, c_factor, kp_constant

_GRID = np.geomspace(1e-12, 50.0, 6001)


@dataclass(frozen=True)
class LemmaConstants:
    alpha: float
    C1: float
    C2: float
    C3: float
    C1_numeric: float
    C2_numeric: float
    C3_numeric: float

    def as_dict(self) -> dict:
        return asdict(self)


def _sup(values: np.ndarray) -> float:
    return float(np.max(values[np.isfinite(values)]))


def derive_lemma_constants(alpha: float) -> LemmaConstants:
    """C1, C2, C3 for a Holder exponent alpha in (0, 1)."""
    if not 0.0 < alpha < 1.0:
        raise ValueError("alpha must lie in (0, 1)")
    t = _GRID
    c0 = c0_constant()
    c = c_factor(t)
    half = c_factor(t / 2.0)
    c1_num = _sup(t ** ((1 - alpha) / 2) * (c * t ** (alpha / 2) / (alpha + 1) + t ** ((alpha - 1) / 2)))
    c1_closed = c0 / (alpha + 1) + 1.0
    C1 = max(c1_num, c1_closed)
    g = (t / 2.0) ** (-(1 - alpha) / 2)
    c2_num = _sup(t ** (1 - alpha / 2) * half * C1 * g)
    c3_num = _sup(t ** (1.5 - alpha / 2) * 2.0 * half ** 2 * C1 * g)
    C2 = max(c2_num, 2.0 ** (1 - alpha / 2) * c0 * C1)
    C3 = max(c3_num, 2.0 ** (2.5 - alpha / 2) * c0 ** 2 * C1)
    return LemmaConstants(alpha, C1, C2, C3, c1_num, c2_num, c3_num)


def schauder_gradient_constant(alpha: float, lam: float) -> float:
    k = derive_lemma_constants(alpha)
    return k.C1 * lam ** (-0.5 - alpha / 2) * gamma_fn(0.5 + alpha / 2)


def schauder_hessian_constant(alpha: float, lam: float) -> float:
    k = derive_lemma_constants(alpha)
    return k.C2 * lam ** (-alpha / 2) * gamma_fn(alpha / 2)


def schauder_holder_constant(alpha: float) -> float:
    k = derive_lemma_constants(alpha)
    return 4.0 * k.C2 / alpha + 2.0 * k.C3 / (1.0 - alpha)


def zygmund_constant() -> float:
    """2 c0 + 2 c1, the constant asserted for the Zygmund seminorm of grad u."""
    return 2.0 * c0_constant() + 2.0 * c1_constant()


def interpolation_constant() -> float:
    """c0 Gamma(1/2) = c0 sqrt(pi), the asserted multiplicative constant."""
    return c0_constant() * math.sqrt(math.pi)


def constants_table(alphas=(0.3, 0.5, 0.7), lams=(0.5, 1.0, 2.0)) -> dict:
    """Everything printed by the ``constants`` subcommand."""
    rows = []
    for a in alphas:
        k = derive_lemma_constants(a)
        row = k.as_dict()
        row["holder_bound"] = schauder_holder_constant(a)
        row["gradient_bound"] = {f"{lam:g}": schauder_gradient_constant(a, lam) for lam in lams}
        row["hessian_bound"] = {f"{lam:g}": schauder_hessian_constant(a, lam) for lam in lams}
        rows.append(row)
    return {
        "k_p": {str(p): kp_constant(float(p)) for p in (1, 2, 3, 4)},
        "c0": c0_constant(),
        "c1": c1_constant(),
        "zygmund": zygmund_constant(),
        "interpolation": interpolation_constant(),
        "lemma": rows,
    }
