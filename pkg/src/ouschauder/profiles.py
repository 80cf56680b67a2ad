"""One-dimensional profiles phi used to build ridge fields x -> phi(<z, x>).

Each profile knows its sup norm, its Holder constants and where it fails to
be analytic.  Breakpoints flagged ``singular`` are algebraic singularities
(e.g. |s|^p at 0) and get a tanh-sinh rule; plain kinks only need the
quadrature partition to be aligned with them.
"""
from __future__ import annotations

import math
from functools import lru_cache

import numpy as np
from scipy import optimize

from .errors import MissingMetadata

KIND_ABS_CLIP_POW = 0
KIND_SINE = 1
KIND_GAUSS_BUMP = 2


class Profile:
    kernel_kind: int | None = None
    breakpoints: tuple[float, ...] = ()
    singular: tuple[bool, ...] = ()
    sup: float = math.inf
    lipschitz: float | None = None
    # length in s over which phi is resolved by one quadrature piece
    scale: float = math.inf

    def __call__(self, s):
        raise NotImplementedError

    def kernel_params(self) -> tuple[float, ...]:
        return ()

    def derivative(self, order: int = 1) -> "Profile":
        raise MissingMetadata(f"{self!r} has no closed-form derivative")

    def holder(self, beta: float) -> float | None:
        """Exact [phi]_beta; ``math.inf`` if phi is not beta-Holder, ``None`` if unknown."""
        return None


class AbsClipPow(Profile):
    """phi(s) = amplitude * min(|s|, clip)**power."""

    kernel_kind = KIND_ABS_CLIP_POW

    def __init__(self, power: float, clip: float = 1.0, amplitude: float = 1.0):
        if not 0.0 < power <= 1.0 or clip <= 0.0:
            raise ValueError("AbsClipPow needs 0 < power <= 1 and clip > 0")
        self.power, self.clip, self.amplitude = float(power), float(clip), float(amplitude)
        self.breakpoints = (-self.clip, 0.0, self.clip)
        self.singular = (False, self.power < 1.0, False)
        self.sup = abs(self.amplitude) * self.clip ** self.power
        self.lipschitz = abs(self.amplitude) if self.power == 1.0 else None

    def __repr__(self):
        return f"AbsClipPow(power={self.power}, clip={self.clip}, amplitude={self.amplitude})"

    def __call__(self, s):
        return self.amplitude * np.minimum(np.abs(s), self.clip) ** self.power

    def kernel_params(self):
        return (self.amplitude, self.power, self.clip)

    def holder(self, beta):
        # |phi(a) - phi(b)| <= min(|a-b|^p, M^p); the bound is attained at (0, M).
        if beta > self.power:
            return math.inf
        return abs(self.amplitude) * self.clip ** (self.power - beta)


@lru_cache(maxsize=None)
def sine_holder_factor(beta: float) -> float:
    """sup_{d>0} 2|sin(d/2)| / d**beta, i.e. the beta-Holder constant of sin."""
    if beta == 1.0:
        return 1.0
    # interior maximiser solves tan(x) = x / beta with x = d/2 in (0, pi/2)
    x = optimize.brentq(lambda x: math.sin(x) * beta - x * math.cos(x), 1e-9, math.pi / 2)
    return 2.0 * math.sin(x) / (2.0 * x) ** beta


class Sine(Profile):
    """phi(s) = amplitude * sin(omega * s + phase)."""

    kernel_kind = KIND_SINE

    def __init__(self, omega: float = 1.0, amplitude: float = 1.0, phase: float = 0.0):
        if omega <= 0.0:
            raise ValueError("omega must be positive")
        self.omega, self.amplitude, self.phase = float(omega), float(amplitude), float(phase)
        self.sup = abs(self.amplitude)
        self.lipschitz = abs(self.amplitude) * self.omega
        self.scale = 1.0 / self.omega

    def __repr__(self):
        return f"Sine(omega={self.omega}, amplitude={self.amplitude}, phase={self.phase})"

    def __call__(self, s):
        return self.amplitude * np.sin(self.omega * np.asarray(s, dtype=float) + self.phase)

    def kernel_params(self):
        return (self.amplitude, self.omega, self.phase)

    def derivative(self, order=1):
        return Sine(self.omega, self.amplitude * self.omega ** order,
                    self.phase + 0.5 * math.pi * order)

    def holder(self, beta):
        return abs(self.amplitude) * self.omega ** beta * sine_holder_factor(beta)


def _hermite_e(order: int, s):
    h0, h1 = np.ones_like(s), s
    if order == 0:
        return h0
    for k in range(1, order):
        h0, h1 = h1, s * h1 - k * h0
    return h1


class GaussBump(Profile):
    """phi(s) = amplitude * d^k/ds^k exp(-s^2/2) = amplitude (-1)^k He_k(s) exp(-s^2/2)."""

    kernel_kind = KIND_GAUSS_BUMP

    def __init__(self, amplitude: float = 1.0, order: int = 0):
        if not 0 <= order <= 4:
            raise ValueError("GaussBump derivative order must be in 0..4")
        self.amplitude, self.order = float(amplitude), int(order)
        self.scale = 1.0 / math.sqrt(self.order + 1.0)
        self.sup = abs(self.amplitude) * _bump_sup(self.order)
        self.lipschitz = abs(self.amplitude) * _bump_sup(self.order + 1) if self.order < 4 else None

    def __repr__(self):
        return f"GaussBump(amplitude={self.amplitude}, order={self.order})"

    def __call__(self, s):
        s = np.asarray(s, dtype=float)
        return self.amplitude * (-1) ** self.order * _hermite_e(self.order, s) * np.exp(-0.5 * s * s)

    def kernel_params(self):
        return (self.amplitude, float(self.order))

    def derivative(self, order=1):
        return GaussBump(self.amplitude, self.order + order)

    def holder(self, beta):
        return abs(self.amplitude) * _bump_holder(self.order, beta)


@lru_cache(maxsize=None)
def _bump_sup(order: int) -> float:
    g = GaussBump.__new__(GaussBump)
    g.amplitude, g.order = 1.0, order
    s = np.linspace(0.0, 8.0, 80001)
    v = np.abs(g(s))
    i = int(np.argmax(v))
    lo, hi = s[max(i - 1, 0)], s[min(i + 1, len(s) - 1)]
    if lo == hi:
        return float(v[i])
    res = optimize.minimize_scalar(lambda x: -abs(float(g(np.array(x)))), bounds=(lo, hi),
                                   method="bounded", options={"xatol": 1e-13})
    return max(float(v[i]), -float(res.fun))


@lru_cache(maxsize=None)
def _bump_holder(order: int, beta: float) -> float:
    """Numerically maximised Holder quotient of a Gaussian-bump derivative.

    A coarse grid over (midpoint, gap) locates the maximiser, Nelder-Mead
    refines it.  The optimiser converges to the global maximum for these
    smooth unimodal-gap quotients; agreement with an independent dense pair
    search is checked in the test suite.
    """
    g = GaussBump.__new__(GaussBump)
    g.amplitude, g.order = 1.0, order

    def quotient(m, d):
        d = np.abs(d) + 1e-300
        return np.abs(g(m + d / 2) - g(m - d / 2)) / d ** beta

    m = np.linspace(-6.0, 6.0, 601)
    d = np.geomspace(1e-3, 12.0, 400)
    M, D = np.meshgrid(m, d, indexing="ij")
    q = quotient(M, D)
    i, j = np.unravel_index(int(np.argmax(q)), q.shape)
    best = float(q[i, j])
    res = optimize.minimize(lambda p: -float(quotient(p[0], p[1])), x0=[M[i, j], D[i, j]],
                            method="Nelder-Mead", options={"xatol": 1e-12, "fatol": 1e-15, "maxiter": 4000})
    return max(best, -float(res.fun))


class CallableProfile(Profile):
    """Wraps an arbitrary vectorised callable (used for composed profiles)."""

    def __init__(self, fn, breakpoints=(), singular=None, sup=math.inf, name="callable",
                 scale=math.inf):
        self.fn = fn
        self.scale = float(scale)
        self.breakpoints = tuple(float(b) for b in breakpoints)
        self.singular = tuple(singular) if singular is not None else (True,) * len(self.breakpoints)
        self.sup = sup
        self.name = name

    def __repr__(self):
        return f"CallableProfile({self.name})"

    def __call__(self, s):
        return self.fn(np.asarray(s, dtype=float))
