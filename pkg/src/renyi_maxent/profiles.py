"""Closed-form maximum-entropy profiles and self-similar diffusion solutions.

Every density here is radial around its centre and has one of two shapes:

* ``RadialPower``: ``peak * (1 + sign * b * r^2)_+ ** exponent``
* ``RadialGaussian``: ``peak * exp(-r^2 / (2 var))`` (the alpha = 1 case)

Powers of a shape are again shapes of the same kind, which gives exact
gradients and Laplacians for f, f^alpha and ln f.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from . import specfun
from .errors import AlphaRangeError, DomainError

class Regime(enum.Enum):
    FAST_DIFFUSION = "FastDiffusion"
    POROUS_MEDIUM = "PorousMedium"
    SHANNON_LIMIT = "ShannonLimit"


def validity_window(regime: Regime, d: int) -> str:
    if regime is Regime.FAST_DIFFUSION:
        return f"({d}/{d + 2}, 1) = ({d / (d + 2):.6g}, 1)"
    if regime is Regime.POROUS_MEDIUM:
        return "(1, inf)"
    return "{1}"


@dataclass(frozen=True)
class AlphaRegime:
    """Validated order alpha together with its regime and dimension."""

    alpha: float
    dimension: int
    regime: Regime

    @classmethod
    def from_alpha(cls, alpha: float, d: int = 1) -> "AlphaRegime":
        if d not in (1, 2, 3):
            raise DomainError(f"dimension must be 1, 2 or 3, got {d!r}")
        alpha = float(alpha)
        if not math.isfinite(alpha):
            raise AlphaRangeError(alpha, d, "(d/(d+2), 1) or [1, inf)")
        if alpha == 1.0:
            return cls(alpha, d, Regime.SHANNON_LIMIT)
        if alpha > 1.0:
            return cls(alpha, d, Regime.POROUS_MEDIUM)
        if alpha > d / (d + 2):
            return cls(alpha, d, Regime.FAST_DIFFUSION)
        raise AlphaRangeError(alpha, d, f"{validity_window(Regime.FAST_DIFFUSION, d)} or [1, inf)")

    @property
    def is_fast(self) -> bool:
        return self.regime is Regime.FAST_DIFFUSION

    @property
    def is_porous(self) -> bool:
        return self.regime is Regime.POROUS_MEDIUM

    @property
    def is_shannon(self) -> bool:
        return self.regime is Regime.SHANNON_LIMIT


class Constants(NamedTuple):
    beta: float
    gamma: float
    delta: float
    A: float
    C: float
    kappa: float
    K: float


def derive_constants(regime: AlphaRegime) -> Constants:
    """Return (beta, gamma, delta, A, C, |kappa|, K) for a validated regime.

    At alpha = 1 the Gaussian limits are returned: beta = 0,
    A = (2 pi)^{-d/2}, C = (4 pi)^{-d/2}, |kappa| = 1/4 and K = 2.
    """
    a, d = regime.alpha, regime.dimension
    gamma = 1.0 / (2.0 + d * (a - 1.0))
    delta = d * gamma
    if regime.is_shannon:
        return Constants(0.0, gamma, delta, (2 * math.pi) ** (-d / 2), (4 * math.pi) ** (-d / 2), 0.25, 2.0)
    S = specfun.surface_area(d)
    beta = abs(1 - a) / (2 * a - d * (1 - a))
    kappa = abs(1 - a) * delta / (2 * a * d)
    if regime.is_fast:
        B = float(specfun.beta(d / 2, 1 / (1 - a) - d / 2))
        A = beta ** (d / 2) * 2 / (S * B)
        C = (B * S / (2 * kappa ** (d / 2))) ** (2 * gamma * (1 - a))
    else:
        B = float(specfun.beta(d / 2, a / (a - 1)))
        A = beta ** (d / 2) * 2 / (S * B)
        C = (2 * kappa ** (d / 2) / (B * S)) ** (2 * gamma * (a - 1))
    K = 2 * a * (2 + d * (a - 1)) / (2 * a + d * (a - 1)) * A ** (a - 1)
    return Constants(beta, gamma, delta, A, C, kappa, K)


# ---------------------------------------------------------------------------
# shapes


@dataclass(frozen=True)
class RadialPower:
    """``peak * (1 + sign * b * r^2)_+ ** exponent`` with sign in {+1, -1}."""

    peak: float
    sign: int
    b: float
    exponent: float

    def q(self, r):
        return 1.0 + self.sign * self.b * np.asarray(r, dtype=float) ** 2

    @property
    def support_radius(self) -> float:
        return math.inf if self.sign > 0 else 1.0 / math.sqrt(self.b)

    @property
    def decay_exponent(self) -> float | None:
        """Power p of the tail r^{-p}; None for compact support."""
        return -2.0 * self.exponent if self.sign > 0 else None

    def inside(self, r):
        return self.q(r) > 0

    def _qpow(self, r, e):
        # q^e via log1p: forming 1 + b r^2 first loses digits when b is tiny and |e| huge
        z = self.sign * self.b * np.asarray(r, dtype=float) ** 2
        with np.errstate(divide="ignore", invalid="ignore"):
            return np.exp(e * np.log1p(np.where(z > -1, z, 0.0)))

    def __call__(self, r):
        val = self.peak * self._qpow(r, self.exponent)
        if self.sign > 0:
            return val
        return np.where(self.q(r) > 0, val, 0.0)

    def power(self, p: float) -> "RadialPower":
        return RadialPower(self.peak**p, self.sign, self.b, self.exponent * p)

    def _safe_q(self, r):
        q = self.q(r)
        return np.where(q > 0, q, np.nan), q > 0

    def radial_derivative(self, r):
        r = np.asarray(r, dtype=float)
        q, ok = self._safe_q(r)
        val = 2 * self.sign * self.b * self.exponent * r * self.peak * self._qpow(r, self.exponent - 1)
        return np.where(ok, val, 0.0)

    def radial_second_derivative(self, r):
        r = np.asarray(r, dtype=float)
        q, ok = self._safe_q(r)
        sb, e = self.sign * self.b, self.exponent
        val = 2 * sb * e * self.peak * (self._qpow(r, e - 1) + 2 * sb * (e - 1) * r * r * self._qpow(r, e - 2))
        return np.where(ok, val, 0.0)

    def laplacian(self, r, d: int):
        r = np.asarray(r, dtype=float)
        q, ok = self._safe_q(r)
        sb, e = self.sign * self.b, self.exponent
        val = 2 * sb * e * self.peak * self._qpow(r, e - 2) * (d * q + 2 * sb * (e - 1) * r * r)
        return np.where(ok, val, 0.0)

    def laplacian_log(self, r, d: int):
        r = np.asarray(r, dtype=float)
        q, ok = self._safe_q(r)
        sb = self.sign * self.b
        val = 2 * sb * self.exponent * (d + (d - 2) * sb * r * r) / q**2
        return np.where(ok, val, np.nan)


@dataclass(frozen=True)
class RadialGaussian:
    """``peak * exp(-r^2 / (2 var))``."""

    peak: float
    var: float

    support_radius = math.inf
    decay_exponent = None

    def inside(self, r):
        return np.ones_like(np.asarray(r, dtype=float), dtype=bool)

    def __call__(self, r):
        r = np.asarray(r, dtype=float)
        return self.peak * np.exp(-0.5 * r * r / self.var)

    def power(self, p: float) -> "RadialGaussian":
        return RadialGaussian(self.peak**p, self.var / p)

    def radial_derivative(self, r):
        r = np.asarray(r, dtype=float)
        return -r / self.var * self(r)

    def radial_second_derivative(self, r):
        r = np.asarray(r, dtype=float)
        return self(r) * (r * r / self.var**2 - 1.0 / self.var)

    def laplacian(self, r, d: int):
        r = np.asarray(r, dtype=float)
        return self(r) * (r * r / self.var**2 - d / self.var)

    def laplacian_log(self, r, d: int):
        return np.full_like(np.asarray(r, dtype=float), -d / self.var)


def _radius(x, d, center=0.0):
    x = np.asarray(x, dtype=float)
    if d == 1:
        return np.abs(x - center)
    if x.shape[-1] != d:
        raise DomainError(f"points must have trailing dimension {d}, got shape {x.shape}")
    return np.linalg.norm(x - center, axis=-1)


# ---------------------------------------------------------------------------
# profiles


@dataclass(frozen=True)
class MaxEntProfile:
    """Rényi maximum-entropy density with mean mu1 and per-coordinate scale mu2."""

    regime: AlphaRegime
    mu1: float
    mu2: float
    beta_const: float
    A_const: float
    gamma_exp: float
    delta_exp: float
    K_coeff: float
    support_radius: float

    @classmethod
    def create(cls, alpha: float, d: int = 1, mu2: float = 1.0, mu1: float = 0.0) -> "MaxEntProfile":
        if not mu2 > 0:
            raise DomainError(f"mu2 must be positive, got {mu2!r}")
        regime = AlphaRegime.from_alpha(alpha, d)
        c = derive_constants(regime)
        support = mu2 / math.sqrt(c.beta) if regime.is_porous else math.inf
        return cls(regime, float(mu1), float(mu2), c.beta, c.A, c.gamma, c.delta, c.K, support)

    @classmethod
    def at_time(cls, alpha: float, d: int, t: float, mu1: float = 0.0) -> "MaxEntProfile":
        """Profile with mu2 = t^gamma."""
        if not t > 0:
            raise DomainError(f"time must be positive, got {t!r}")
        gamma = 1.0 / (2.0 + d * (alpha - 1.0))
        return cls.create(alpha, d, t**gamma, mu1)

    @property
    def alpha(self) -> float:
        return self.regime.alpha

    @property
    def dimension(self) -> int:
        return self.regime.dimension

    @property
    def constants(self) -> Constants:
        return derive_constants(self.regime)

    @property
    def time(self) -> float:
        """Time t with mu2 = t^gamma."""
        return self.mu2 ** (1.0 / self.gamma_exp)

    def shape(self):
        a, d, m = self.alpha, self.dimension, self.mu2
        peak = self.A_const * m ** (-d)
        if self.regime.is_shannon:
            return RadialGaussian(peak, m * m)
        if self.regime.is_fast:
            return RadialPower(peak, +1, self.beta_const / m**2, -1.0 / (1.0 - a))
        return RadialPower(peak, -1, self.beta_const / m**2, 1.0 / (a - 1.0))

    def radial(self, r):
        return self.shape()(r)

    def __call__(self, x):
        return self.shape()(_radius(x, self.dimension, self.mu1))

    @property
    def sup_norm(self) -> float:
        return self.A_const * self.mu2 ** (-self.dimension)

    @property
    def scale_length(self) -> float:
        """Envelope length mu2 / sqrt(beta) (mu2 at alpha = 1)."""
        return self.mu2 if self.regime.is_shannon else self.mu2 / math.sqrt(self.beta_const)


@dataclass(frozen=True)
class ZkbProfile:
    """Self-similar source solution of u_t = Laplacian(u^alpha) with unit mass."""

    regime: AlphaRegime
    time: float
    C_const: float
    kappa_abs: float
    gamma_exp: float
    delta_exp: float

    @classmethod
    def create(cls, alpha: float, d: int = 1, t: float = 1.0) -> "ZkbProfile":
        if not t > 0:
            raise DomainError(f"time must be positive, got {t!r}")
        regime = AlphaRegime.from_alpha(alpha, d)
        c = derive_constants(regime)
        return cls(regime, float(t), c.C, c.kappa, c.gamma, c.delta)

    @property
    def alpha(self) -> float:
        return self.regime.alpha

    @property
    def dimension(self) -> int:
        return self.regime.dimension

    def shape(self):
        a, d, t = self.alpha, self.dimension, self.time
        if self.regime.is_shannon:
            return RadialGaussian((4 * math.pi * t) ** (-d / 2), 2 * t)
        C, k = self.C_const, self.kappa_abs
        b = k / (C * t ** (2 * self.gamma_exp))
        if self.regime.is_fast:
            e = -1.0 / (1.0 - a)
            return RadialPower(t ** (-self.delta_exp) * C**e, +1, b, e)
        e = 1.0 / (a - 1.0)
        return RadialPower(t ** (-self.delta_exp) * C**e, -1, b, e)

    def radial(self, r):
        return self.shape()(r)

    def __call__(self, x):
        return self.shape()(_radius(x, self.dimension))

    @property
    def sup_norm(self) -> float:
        a, t = self.alpha, self.time
        if self.regime.is_shannon:
            return (4 * math.pi * t) ** (-self.dimension / 2)
        if self.regime.is_fast:
            return t ** (-self.delta_exp) * self.C_const ** (-1.0 / (1.0 - a))
        return t ** (-self.delta_exp) * self.C_const ** (1.0 / (a - 1.0))

    @property
    def support_radius(self) -> float:
        return self.shape().support_radius


def maxent_pdf(profile: MaxEntProfile, x):
    """Evaluate the maximum-entropy density at points ``x`` (shape (..., d) or (...) for d = 1)."""
    return profile(x)


def zkb_pdf(profile: ZkbProfile, x):
    return profile(x)


def sup_norm(profile) -> float:
    """Analytic peak value of a profile."""
    return float(profile.sup_norm)


def shifted_maxent_pdf(alpha: float, mu1: float, mu2: float, x):
    """One-dimensional maximum-entropy density with mean mu1 and standard deviation mu2.

    Equals ``f_Y((x - mu1) / mu2) / mu2`` with f_Y the unit-scale centred profile.
    """
    centred = MaxEntProfile.create(alpha, 1, 1.0)
    return centred((np.asarray(x, dtype=float) - mu1) / mu2) / mu2


def integer_order(alpha: float) -> int | None:
    """n = 1/(1 - alpha) when it is an integer >= 2, else None."""
    if not alpha < 1:
        return None
    n = 1.0 / (1.0 - alpha)
    k = round(n)
    return int(k) if k >= 2 and abs(n - k) < 1e-12 else None


def double_factorial_pdf(n: int, mu1: float, mu2: float, x, printed: bool = False):
    """Shifted profile written with double factorials, for integer n = 1/(1 - alpha).

    With r = (2n-3)!!/(2n-5)!! = 1/beta the normalized density is
    ``(2n-2)!!/(2n-3)!! * sqrt(1/r) / (pi mu2) * (1 + z^2 / r)^(-n)``.
    ``printed=True`` drops the 1/pi and uses ``1 + r z^2`` in the bracket;
    that variant is kept only for comparison.
    """
    if int(n) != n or n < 2:
        raise DomainError(f"n must be an integer >= 2, got {n!r}")
    n = int(n)
    df = specfun.double_factorial
    ratio = df(2 * n - 3) / df(2 * n - 5)
    pref = df(2 * n - 2) / df(2 * n - 3) * math.sqrt(1.0 / ratio) / mu2
    z = (np.asarray(x, dtype=float) - mu1) / mu2
    if printed:
        return pref * (1.0 + ratio * z * z) ** (-n)
    return pref / math.pi * (1.0 + z * z / ratio) ** (-n)


def compare_double_factorial_form(alpha: float, mu1: float = 0.0, mu2: float = 1.0, x=None) -> dict:
    """Compare both double-factorial variants with :func:`shifted_maxent_pdf`.

    ``prefactor_ratio`` is the printed peak over the true peak (pi for every
    n); the deviations are sup-distances over ``x``.
    """
    n = integer_order(alpha)
    if n is None:
        raise DomainError(f"1/(1-alpha) must be an integer >= 2, got alpha={alpha!r}")
    if x is None:
        x = mu1 + mu2 * np.linspace(-10, 10, 401)
    ref = shifted_maxent_pdf(alpha, mu1, mu2, x)
    corrected = double_factorial_pdf(n, mu1, mu2, x)
    printed = double_factorial_pdf(n, mu1, mu2, x, printed=True)
    peak = float(shifted_maxent_pdf(alpha, mu1, mu2, mu1))
    return {
        "n": n,
        "prefactor_ratio": float(double_factorial_pdf(n, mu1, mu2, mu1, printed=True)) / peak,
        "printed_max_deviation": float(np.max(np.abs(printed - ref))),
        "corrected_max_deviation": float(np.max(np.abs(corrected - ref))),
    }
