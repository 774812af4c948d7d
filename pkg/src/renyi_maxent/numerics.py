"""Radial and line quadrature, finite-difference stencils and closed-form radial integrals.

Grids are composite Gauss-Legendre rules on a mapped variable:

* ``half_line`` uses ``r = s sinh(u)`` so that power-law tails become
  exponentials in ``u``; the truncation radius comes from an analytic bound
  on the omitted tail of the envelope ``(r / s_env)^(-p)``.
* ``compact`` uses ``r = R (1 - (1 - s)^m)`` which clusters nodes at the
  edge ``r = R`` where profiles with compact support lose smoothness.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy import integrate

from . import specfun
from .errors import DomainError, EvaluationError, MomentDivergenceError, NonIntegrableTailError
from .report import Check, ConformanceReport

TAIL_TARGET = 1e-12
_GAUSSIAN = None


def surface_area(d: int) -> float:
    """Area of the unit sphere S_{d-1} in R^d (2 for d = 1)."""
    return specfun.surface_area(d)


def _check_dimension(d):
    if d not in (1, 2, 3):
        raise DomainError(f"dimension must be 1, 2 or 3, got {d!r}")


@dataclass(frozen=True)
class RadialGrid:
    """Quadrature rule on [0, truncation_radius].

    ``weights`` integrate plain functions of r (no r^{d-1} factor); the
    sphere measure is applied by :func:`integrate_radial`.
    """

    nodes: np.ndarray
    weights: np.ndarray
    dimension: int
    truncation_radius: float
    tail_bound: float
    compact: bool = False

    def __post_init__(self):
        nodes = np.asarray(self.nodes, dtype=float)
        weights = np.asarray(self.weights, dtype=float)
        if nodes.shape != weights.shape or nodes.ndim != 1:
            raise DomainError("nodes and weights must be 1-D arrays of equal length")
        if np.any(nodes < 0) or np.any(np.diff(nodes) <= 0):
            raise DomainError("nodes must be nonnegative and strictly increasing")
        if np.any(weights <= 0):
            raise DomainError("weights must be positive")
        if self.tail_bound < 0:
            raise DomainError("tail_bound must be nonnegative")
        _check_dimension(self.dimension)
        nodes.setflags(write=False)
        weights.setflags(write=False)
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "weights", weights)

    def __len__(self):
        return self.nodes.size

    @property
    def radial_weights(self) -> np.ndarray:
        """Weights including |S_{d-1}| r^{d-1}."""
        return surface_area(self.dimension) * self.weights * self.nodes ** (self.dimension - 1)

    def quad(self, values) -> float:
        """Plain integral over [0, R] of sampled values."""
        return float(np.dot(self.weights, values))


@dataclass(frozen=True)
class LineGrid:
    """Quadrature rule on the real line, mirrored about ``center``."""

    nodes: np.ndarray
    weights: np.ndarray
    center: float
    tail_bound: float

    @classmethod
    def from_radial(cls, grid: RadialGrid, center: float = 0.0) -> "LineGrid":
        nodes = np.concatenate([-grid.nodes[::-1], grid.nodes]) + center
        weights = np.concatenate([grid.weights[::-1], grid.weights])
        return cls(nodes, weights, float(center), 2.0 * grid.tail_bound)

    def __len__(self):
        return self.nodes.size

    def quad(self, values) -> float:
        return float(np.dot(self.weights, values))


def _gauss_panels(n_panels, order, lo, hi):
    x, w = np.polynomial.legendre.leggauss(order)
    edges = np.linspace(lo, hi, n_panels + 1)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[1:] + edges[:-1])
    nodes = (mid[:, None] + half[:, None] * x[None, :]).ravel()
    weights = (half[:, None] * w[None, :]).ravel()
    return nodes, weights


def power_tail_bound(radius, decay_exponent, dimension, envelope_scale=1.0, moment=0) -> float:
    """Bound on the integral of r^{d-1+m} (r/s)^{-p} over [radius, inf)."""
    k = decay_exponent - dimension - moment
    if k <= 0:
        raise NonIntegrableTailError(moment, decay_exponent, dimension)
    s = envelope_scale
    return s ** (dimension + moment) * (radius / s) ** (-k) / k


def _power_truncation(decay_exponent, dimension, envelope_scale, moment, target):
    k = decay_exponent - dimension - moment
    if k <= 0:
        raise NonIntegrableTailError(moment, decay_exponent, dimension)
    # (R/s)^{-k} / k = target, relative to s^{d+m} so the grid is scale-equivariant
    return envelope_scale * (target * k) ** (-1.0 / k)


def _gaussian_truncation(dimension, envelope_scale, moment, target):
    # tail of r^{d-1+m} exp(-r^2 / (2 s^2)); use the bound R^{k-1} e^{-R^2/2} (R >= sqrt(k))
    k = dimension - 1 + moment
    z = max(1.0, math.sqrt(max(k, 1)))
    while z ** max(k - 1, 0) * math.exp(-0.5 * z * z) * envelope_scale ** (k + 1) > target:
        z += 0.25
    return envelope_scale * z, envelope_scale ** (k + 1) * z ** max(k - 1, 0) * math.exp(-0.5 * z * z)


def build_grid(
    domain: str = "half_line",
    n_nodes: int = 1024,
    decay_exponent: float | None = None,
    *,
    dimension: int = 1,
    radius: float | None = None,
    scale: float = 1.0,
    envelope_scale: float | None = None,
    moment: int = 0,
    edge_grading: float = 1.0,
    order: int = 8,
    tail_target: float = TAIL_TARGET,
) -> RadialGrid:
    """Build a composite Gauss-Legendre radial grid.

    Parameters
    ----------
    domain : {"half_line", "compact"}
        ``compact`` integrates over [0, radius] exactly.
    n_nodes : int
        Requested node count (>= 16); rounded up to whole panels.
    decay_exponent : float or None
        Power ``p`` of the tail envelope ``(r / envelope_scale)^(-p)`` on
        the half line.  ``None`` selects a Gaussian envelope.
    scale : float
        Length scale of the sinh map, i.e. where node density starts to thin.
    moment : int
        Highest moment order the grid must support; the tail must satisfy
        ``p > d + moment``.
    edge_grading : float
        Exponent ``m`` of the edge-clustering map on compact domains.
    """
    _check_dimension(dimension)
    if int(n_nodes) != n_nodes or n_nodes < 16:
        raise DomainError(f"n_nodes must be an integer >= 16, got {n_nodes!r}")
    if order < 2:
        raise DomainError("order must be at least 2")
    n_panels = -(-int(n_nodes) // order)
    if domain == "compact":
        if radius is None or not radius > 0:
            raise DomainError("compact domain needs a positive radius")
        if edge_grading < 1:
            raise DomainError("edge_grading must be >= 1")
        s, ws = _gauss_panels(n_panels, order, 0.0, 1.0)
        # cap the grading so the node nearest the edge stays distinct from R
        gap = 1.0 - s[-1]
        m = float(min(edge_grading, max(1.0, math.log(64 * np.finfo(float).eps) / math.log(gap))))
        nodes = radius * (1.0 - (1.0 - s) ** m)
        weights = ws * radius * m * (1.0 - s) ** (m - 1.0)
        return RadialGrid(nodes, weights, dimension, float(radius), 0.0, compact=True)
    if domain != "half_line":
        raise DomainError(f"unknown domain {domain!r}; expected 'half_line' or 'compact'")
    if not scale > 0:
        raise DomainError("scale must be positive")
    env = scale if envelope_scale is None else envelope_scale
    if decay_exponent is _GAUSSIAN:
        r_max, tail = _gaussian_truncation(dimension, env, moment, tail_target)
    else:
        if not decay_exponent > 0:
            raise DomainError("decay_exponent must be positive")
        r_max = _power_truncation(decay_exponent, dimension, env, moment, tail_target)
        r_max = max(r_max, env)
        tail = power_tail_bound(r_max, decay_exponent, dimension, env, moment)
    if radius is not None:
        r_max = min(r_max, radius)
    u_max = math.asinh(r_max / scale)
    u, wu = _gauss_panels(n_panels, order, 0.0, u_max)
    nodes = scale * np.sinh(u)
    weights = wu * scale * np.cosh(u)
    return RadialGrid(nodes, weights, dimension, float(r_max), float(tail))


def integrate_radial(f, grid: RadialGrid, *, with_tail: bool = False):
    """Integrate a radial function over R^d.

    Parameters
    ----------
    f : callable or array
        Function of radius, or its values at ``grid.nodes``.
    with_tail : bool
        Also return the grid's analytic tail bound.
    """
    values = f(grid.nodes) if callable(f) else f
    values = np.broadcast_to(np.asarray(values, dtype=float), grid.nodes.shape)
    bad = np.flatnonzero(~np.isfinite(values))
    if bad.size:
        i = int(bad[0])
        raise EvaluationError(i, float(grid.nodes[i]), float(values[i]))
    value = float(np.dot(grid.radial_weights, values))
    return (value, grid.tail_bound) if with_tail else value


def integrate_line(f, grid: LineGrid) -> float:
    values = f(grid.nodes) if callable(f) else f
    values = np.broadcast_to(np.asarray(values, dtype=float), grid.nodes.shape)
    bad = np.flatnonzero(~np.isfinite(values))
    if bad.size:
        i = int(bad[0])
        raise EvaluationError(i, float(grid.nodes[i]), float(values[i]))
    return grid.quad(values)


# ---------------------------------------------------------------------------
# finite differences


@dataclass(frozen=True)
class StencilSpec:
    order: int = 2
    step: float = 1e-4

    def __post_init__(self):
        if self.order not in (2, 4):
            raise DomainError(f"stencil order must be 2 or 4, got {self.order!r}")
        if not self.step > 0:
            raise DomainError("stencil step must be positive")

    def halved(self) -> "StencilSpec":
        return StencilSpec(self.order, self.step / 2)


_FIRST = {2: ((-1, -0.5), (1, 0.5)), 4: ((-2, 1 / 12), (-1, -8 / 12), (1, 8 / 12), (2, -1 / 12))}
_SECOND = {
    2: ((-1, 1.0), (0, -2.0), (1, 1.0)),
    4: ((-2, -1 / 12), (-1, 16 / 12), (0, -30 / 12), (1, 16 / 12), (2, -1 / 12)),
}


def central_difference(func: Callable, t: float, stencil: StencilSpec, derivative: int = 1):
    """Central finite difference of ``func`` at ``t`` (first or second derivative)."""
    table = {1: _FIRST, 2: _SECOND}.get(derivative)
    if table is None:
        raise DomainError("derivative must be 1 or 2")
    h = stencil.step
    acc = 0.0
    for k, c in table[stencil.order]:
        acc = acc + c * np.asarray(func(t + k * h), dtype=float)
    return acc / h**derivative


def richardson(func: Callable, t: float, stencil: StencilSpec, derivative: int = 1):
    """Richardson-extrapolated central difference from steps h and h/2."""
    coarse = central_difference(func, t, stencil, derivative)
    fine = central_difference(func, t, stencil.halved(), derivative)
    w = 2.0**stencil.order
    return (w * fine - coarse) / (w - 1.0)


def observed_orders(errors) -> list[float]:
    """log2 ratios of successive errors under step halving."""
    e = np.asarray(errors, dtype=float)
    return [float(np.log2(a / b)) for a, b in zip(e[:-1], e[1:])]


# ---------------------------------------------------------------------------
# closed-form radial integrals


def _alpha_window_note(kind, d):
    if kind == "A3":
        return f"lambda = 1/(1-alpha) needs alpha > {max(0.0, 1 - 2 / d):.6g} in d={d}"
    return f"lambda = 1/(1-alpha) needs alpha > {1 - 2 / (d + 2):.6g} in d={d}"


def analytic_radial_integral(kind: str, C: float, g: float, exponent: float, d: int) -> float:
    """Closed-form radial integrals over R^d.

    ``A3``: integral of (C + g r^2)^(-lambda).
    ``A5``: integral of r^2 (C + g r^2)^(-lambda).
    ``A7``: integral of (C - g r^2)_+^k.

    ``exponent`` is lambda for A3/A5 and k for A7.
    """
    _check_dimension(d)
    if not (C > 0 and g > 0):
        raise DomainError("C and g must be positive")
    S = surface_area(d)
    if kind == "A3":
        lam = exponent
        if not d < 2 * lam:
            raise MomentDivergenceError(f"moment does not converge: need d < 2 lambda; {_alpha_window_note(kind, d)}")
        return float(S * C ** (d / 2 - lam) / (2 * g ** (d / 2)) * specfun.beta(d / 2, lam - d / 2))
    if kind == "A5":
        lam = exponent
        if not d + 2 < 2 * lam:
            raise MomentDivergenceError(
                f"moment does not converge: need d + 2 < 2 lambda; {_alpha_window_note(kind, d)}"
            )
        return float(S * C ** (d / 2 + 1 - lam) / (2 * g ** (1 + d / 2)) * specfun.beta(d / 2 + 1, lam - d / 2 - 1))
    if kind == "A7":
        k = exponent
        if not k > 0:
            raise MomentDivergenceError("moment does not converge: need k > 0, i.e. alpha > 1")
        return float(S * 0.5 * g ** (-d / 2) * C ** (d / 2 + k) * specfun.beta(d / 2, k + 1))
    raise DomainError(f"unknown kind {kind!r}; expected A3, A5 or A7")


def _rational_checks(a, b, c, n, m):
    if int(n) != n or n < 1 or int(m) != m or m < 0:
        raise DomainError("n must be a positive integer and m a nonnegative integer")
    if not a * c - b * b > 0:
        raise DomainError(f"need ac - b^2 > 0, got {a * c - b * b!r}")
    if not (m <= 2 * (n - 1) or (m == 0 and n == 1)):
        raise MomentDivergenceError(f"moment does not converge: need m <= 2(n-1), got m={m}, n={n}")


def _rational_sum(b, D, n, m):
    df = specfun.double_factorial
    total = 0.0
    for k in range(m // 2 + 1):
        # b^{m-2k} with 0^0 = 1 keeps the b = 0 case finite
        total += math.comb(m, 2 * k) * df(2 * k - 1) * df(2 * n - 2 * k - 3) * D**k * b ** (m - 2 * k)
    return total


def rational_moment(a: float, b: float, c: float, n: int, m: int) -> float:
    """Integral over R of x^m / (a x^2 + 2 b x + c)^n.

    The power of ``a`` is n - m - 1, the value confirmed by quadrature; see
    :func:`rational_moment_printed` for the alternative a^{n-m}.
    """
    _rational_checks(a, b, c, n, m)
    D = a * c - b * b
    df = specfun.double_factorial
    pref = (-1) ** m * math.pi * a ** (n - m - 1) / (df(2 * n - 2) * D ** (n - 0.5))
    return pref * _rational_sum(b, D, n, m)


def rational_moment_printed(a: float, b: float, c: float, n: int, m: int) -> float:
    """Same sum with the prefactor a^{n-m}; disagrees with quadrature unless a = 1."""
    _rational_checks(a, b, c, n, m)
    D = a * c - b * b
    df = specfun.double_factorial
    pref = (-1) ** m * math.pi * a ** (n - m) / (df(2 * n - 2) * D ** (n - 0.5))
    return pref * _rational_sum(b, D, n, m)


def rational_moment_quadrature(a, b, c, n, m) -> float:
    """Adaptive quadrature oracle for :func:`rational_moment`."""
    _rational_checks(a, b, c, n, m)
    x0 = -b / a

    def integrand(x):
        return x**m / (a * x * x + 2 * b * x + c) ** n

    left, _ = integrate.quad(integrand, -np.inf, x0, epsabs=1e-15, epsrel=1e-13, limit=400)
    right, _ = integrate.quad(integrand, x0, np.inf, epsabs=1e-15, epsrel=1e-13, limit=400)
    return left + right


_A8_CASES = (
    (1.0, 0.0, 1.0, 1, 0),
    (4.0, 0.0, 1.0, 1, 0),
    (2.0, 0.5, 3.0, 2, 1),
    (2.0, 0.5, 3.0, 2, 2),
    (3.0, -1.0, 2.0, 3, 3),
    (0.5, 0.25, 4.0, 3, 4),
    (1.5, 0.7, 1.0, 4, 5),
    (2.5, -0.3, 0.8, 4, 6),
)


def verify_integral_formulas(n_nodes: int = 2048) -> ConformanceReport:
    """Compare quadrature with the closed forms A3, A5, A7 and the rational moment formula."""
    report = ConformanceReport("integrals")
    worst = {"A.3": 0.0, "A.5": 0.0, "A.7": 0.0}
    fast = [(a, d) for d in (1, 2, 3) for a in (0.45, 0.55, 0.65, 0.75, 0.85, 0.95) if a > d / (d + 2)]
    for alpha, d in fast[:10]:
        lam = 1 / (1 - alpha)
        g = (1 - alpha) / (2 * alpha - d * (1 - alpha))
        grid = build_grid("half_line", n_nodes, 2 * lam, dimension=d, scale=1.0, envelope_scale=1 / math.sqrt(g), moment=2)
        base = (1 + g * grid.nodes**2) ** (-lam)
        q3 = integrate_radial(base, grid)
        q5 = integrate_radial(base * grid.nodes**2, grid)
        worst["A.3"] = max(worst["A.3"], abs(q3 / analytic_radial_integral("A3", 1.0, g, lam, d) - 1))
        worst["A.5"] = max(worst["A.5"], abs(q5 / analytic_radial_integral("A5", 1.0, g, lam, d) - 1))
    for alpha, d in [(a, d) for d in (1, 2, 3) for a in (1.25, 1.5, 2.0, 3.0)][:10]:
        k = 1 / (alpha - 1)
        g = (alpha - 1) / (2 * alpha + d * (alpha - 1))
        R = 1 / math.sqrt(g)
        grid = build_grid("compact", n_nodes, dimension=d, radius=R, edge_grading=8)
        q7 = integrate_radial(np.clip(1 - g * grid.nodes**2, 0, None) ** k, grid)
        worst["A.7"] = max(worst["A.7"], abs(q7 / analytic_radial_integral("A7", 1.0, g, k, d) - 1))
    for name, dev in worst.items():
        report.add(Check(name, dev <= 1e-9, dev, note="relative deviation from quadrature over a 20-point (alpha, d) grid"))
    dev_valid = 0.0
    dev_printed = 0.0
    for case in _A8_CASES:
        ref = rational_moment_quadrature(*case)
        scale = max(abs(ref), 1e-12)
        dev_valid = max(dev_valid, abs(rational_moment(*case) - ref) / scale)
        dev_printed = max(dev_printed, abs(rational_moment_printed(*case) - ref) / scale)
    report.add(Check("A.8", dev_valid <= 1e-9, dev_valid, note="prefactor a^(n-m-1) against adaptive quadrature"))
    report.add(
        Check(
            "A.8 printed exponent",
            dev_printed <= 1e-9,
            dev_printed,
            soft=True,
            note="prefactor a^(n-m) disagrees with quadrature whenever a != 1; a^(n-m-1) is used",
        )
    )
    return report
