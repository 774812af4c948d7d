"""Gamma, beta, digamma and double factorial, plus the beta/gamma identity checks.

All real-valued functions accept scalars or numpy arrays and return the same
shape.  Only positive real arguments are supported.
"""
from __future__ import annotations

import math
from typing import NamedTuple

import numpy as np

from .errors import DomainError
from .report import Check, ConformanceReport

# Lanczos approximation, g = 7, n = 9 (Godfrey's coefficients).
_LANCZOS_G = 7.0
_LANCZOS_COEF = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)
_HALF_LOG_2PI = 0.5 * math.log(2.0 * math.pi)


def _positive(x, name="x"):
    arr = np.asarray(x, dtype=float)
    if np.any(~np.isfinite(arr)) or np.any(arr <= 0):
        raise DomainError(f"{name} must be positive and finite, got {x!r}")
    return arr


def _lanczos_lngamma(x):
    z = x - 1.0
    acc = np.full_like(z, _LANCZOS_COEF[0])
    for i, c in enumerate(_LANCZOS_COEF[1:], start=1):
        acc = acc + c / (z + i)
    t = z + _LANCZOS_G + 0.5
    return _HALF_LOG_2PI + (z + 0.5) * np.log(t) - t + np.log(acc)


def ln_gamma(x):
    """Natural log of the gamma function for x > 0.

    Uses the Lanczos series for x >= 1/2 and the reflection formula below.
    """
    arr = _positive(x)
    out = np.empty_like(arr)
    small = arr < 0.5
    out[~small] = _lanczos_lngamma(arr[~small])
    if np.any(small):
        xs = arr[small]
        out[small] = np.log(np.pi / np.sin(np.pi * xs)) - _lanczos_lngamma(1.0 - xs)
    return out[()] if out.ndim == 0 else out


_STIRLING = (1.0 / 12, -1.0 / 360, 1.0 / 1260, -1.0 / 1680, 1.0 / 1188, -691.0 / 360360)
_STIRLING_MIN = 10.0


def _stirling_tail(z):
    inv = 1.0 / z
    inv2 = inv * inv
    acc = np.zeros_like(z)
    for c in reversed(_STIRLING):
        acc = acc * inv2 + c
    return acc * inv


def _ln_gamma_shift(x, c):
    """ln Gamma(x + c) - ln Gamma(x) without cancelling two large logs.

    Stirling's series for x >= 10; c ln x is kept apart from the O(c^2 / x)
    remainder.  Elsewhere the plain difference is accurate enough.
    """
    x, c = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(c, dtype=float))
    out = np.empty(x.shape)
    big = np.minimum(x, x + c) >= _STIRLING_MIN
    xb, cb = x[big], c[big]
    out[big] = (
        cb * np.log(xb)
        + ((xb - 0.5) * np.log1p(cb / xb) - cb)
        + cb * np.log1p(cb / xb)
        + _stirling_tail(xb + cb)
        - _stirling_tail(xb)
    )
    if np.any(~big):
        out[~big] = ln_gamma(x[~big] + c[~big]) - ln_gamma(x[~big])
    return out[()] if out.ndim == 0 else out


def gamma(x):
    """Gamma function for x > 0."""
    return np.exp(ln_gamma(x))


class BetaArgs(NamedTuple):
    a: float
    b: float

    def validated(self) -> "BetaArgs":
        if not (self.a > 0 and self.b > 0):
            raise DomainError(f"beta arguments must be positive, got a={self.a!r}, b={self.b!r}")
        return self


def ln_beta(a, b):
    _positive(a, "a")
    _positive(b, "b")
    lo, hi = np.minimum(a, b), np.maximum(a, b)
    return ln_gamma(lo) - _ln_gamma_shift(hi, lo)


def beta(a, b=None):
    """Euler's beta function B(a, b) = Gamma(a) Gamma(b) / Gamma(a + b).

    Accepts either two numbers or a single :class:`BetaArgs`.
    """
    if b is None:
        a, b = BetaArgs(*a).validated()
    return np.exp(ln_beta(a, b))


def gamma_ratio(x, c):
    """Gamma(x) / Gamma(x + c)."""
    _positive(x)
    _positive(np.add(x, c), "x + c")
    return np.exp(-_ln_gamma_shift(x, c))


def digamma(x):
    """Logarithmic derivative of the gamma function for x > 0.

    Shifts the argument above 10 with the recurrence psi(x) = psi(x+1) - 1/x
    and sums the asymptotic series there.
    """
    arr = _positive(x).copy()
    shift = np.zeros_like(arr)
    low = arr < 10.0
    while np.any(low):
        shift[low] += 1.0 / arr[low]
        arr[low] += 1.0
        low = arr < 10.0
    inv2 = 1.0 / (arr * arr)
    series = inv2 * (
        1.0 / 12
        - inv2 * (1.0 / 120 - inv2 * (1.0 / 252 - inv2 * (1.0 / 240 - inv2 * (1.0 / 132 - inv2 * 691.0 / 32760))))
    )
    out = np.log(arr) - 0.5 / arr - series - shift
    return out[()] if out.ndim == 0 else out


def double_factorial(n: int) -> int:
    """n!! with the conventions (-1)!! = 0!! = 1."""
    if int(n) != n:
        raise DomainError(f"double factorial needs an integer, got {n!r}")
    n = int(n)
    if n < -1:
        raise DomainError(f"double factorial undefined for n={n} < -1")
    return math.prod(range(n, 0, -2))


def surface_area(d: int) -> float:
    """|S_{d-1}| = 2 pi^{d/2} / Gamma(d/2); equals 2 for d = 1."""
    return float(2.0 * np.pi ** (d / 2.0) / gamma(d / 2.0))


# ---------------------------------------------------------------------------
# identity checks


def _limit_check(tolerance) -> list[Check]:
    """rho^{s/2} B(s/2, rho - s/2) -> Gamma(s/2) as rho -> infinity.

    The limit is accepted when the deviation shrinks along the rho grid and
    rho * deviation matches the first-order coefficient s(s+2)/8 Gamma(s/2)
    of the standard gamma-ratio expansion.  The raw deviation is O(1/rho),
    so ``tolerance`` is applied to the rate, relative to that coefficient.
    """
    rhos = np.array([1e3, 1e4, 1e5])
    checks = []
    worst_rate = 0.0
    worst_dev = 0.0
    decreasing = True
    printed_rate_dev = 0.0
    for s in (1.0, 2.0, 3.0, 4.0):
        limit = float(gamma(s / 2))
        vals = np.array([r ** (s / 2) * float(beta(s / 2, r - s / 2)) for r in rhos])
        dev = np.abs(vals - limit)
        decreasing &= bool(np.all(np.diff(dev) < 0))
        coef = s * (s + 2) / 8.0 * limit
        rate = rhos * (vals - limit)
        # O(1/rho) remainder of rho*dev; a looser check at the largest rho only.
        worst_rate = max(worst_rate, abs(rate[-1] - coef) / coef)
        worst_dev = max(worst_dev, dev[-1])
        printed = s * (s + 2) / 4.0 * limit
        printed_rate_dev = max(printed_rate_dev, abs(rate[-1] - printed) / printed)
    rate_tol = max(1e-3, tolerance)
    checks.append(
        Check(
            "A.9",
            decreasing and worst_rate <= rate_tol,
            worst_dev,
            note=f"deviation decreasing over rho={rhos.tolist()}: {decreasing}; "
            f"relative error of first-order rate at rho=1e5: {worst_rate:.3e}",
        )
    )
    checks.append(
        Check(
            "A.10 printed first-order coefficient",
            printed_rate_dev <= rate_tol,
            printed_rate_dev,
            soft=True,
            note="printed (a-b)(a+b-1)/rho; direct evaluation matches (a-b)(a+b-1)/(2 rho)",
        )
    )
    return checks


def _a11_checks(tolerance) -> list[Check]:
    dev_fast = 0.0
    for alpha in (0.55, 0.6, 0.7, 0.8, 0.9, 0.95):
        for d in (1, 2, 3):
            if alpha <= d / (d + 2):
                continue
            low = alpha / (1 - alpha) - d / 2
            lhs = (
                d * beta(d / 2, 1 / (1 - alpha) - d / 2) / beta(d / 2, low)
                + (d - 2) * beta(1 + d / 2, low) / beta(d / 2, low)
            )
            dev_fast = max(dev_fast, abs(lhs - d / alpha * (2 * alpha - 1)))
    dev_slow = 0.0
    for alpha in (1.25, 1.5, 2.0, 2.2, 3.0, 5.0):
        for d in (1, 2, 3):
            p = alpha / (alpha - 1)
            lhs = d * beta(d / 2, p) / beta(d / 2, p + 1) - (d + 2) * beta(1 + d / 2, 1 / (alpha - 1) + 1) / beta(
                d / 2, p + 1
            )
            dev_slow = max(dev_slow, abs(lhs - d / alpha))
    return [
        Check("A.11 (alpha<1)", dev_fast <= tolerance, dev_fast),
        Check("A.11 (alpha>1)", dev_slow <= tolerance, dev_slow),
    ]


def _a12_a13_checks(tolerance) -> list[Check]:
    df = double_factorial
    dev1 = dev2 = dev3 = 0.0
    for n in range(2, 11):
        rhs = df(2 * n - 3) / df(2 * n - 2) * math.pi
        dev1 = max(dev1, abs(beta(0.5, n - 0.5) / rhs - 1))
        for k in range(1, n):
            rhs = df(2 * k - 1) * df(2 * n - 2 * k - 3) / df(2 * n - 2) * math.pi
            dev2 = max(dev2, abs(beta(k + 0.5, n - k - 0.5) / rhs - 1))
    for n in range(1, 11):
        dev3 = max(dev3, abs(beta(0.5, n + 1) / (2.0 ** (2 * n + 1) * beta(n + 1, n + 1)) - 1))
    dev4 = 0.0
    for n in range(1, 16):
        g_half = math.sqrt(math.pi) / 2**n * df(2 * n - 1)
        g_int = df(2 * n - 2) / 2 ** (n - 1)
        dev4 = max(dev4, abs(gamma(n + 0.5) / g_half - 1), abs(gamma(n) / g_int - 1))
    return [
        Check("A.12 B(1/2,n-1/2)", dev1 <= tolerance, dev1, note="relative deviation, n=2..10"),
        Check("A.12 B(k+1/2,n-k-1/2)", dev2 <= tolerance, dev2, note="relative deviation, 1<=k<n<=10"),
        Check("A.12 doubling", dev3 <= tolerance, dev3, note="relative deviation, n=1..10"),
        Check("A.13", dev4 <= tolerance, dev4, note="relative deviation, n=1..15"),
    ]


def _a14_checks() -> list[Check]:
    xs = np.linspace(0.05, 40.0, 800)
    worst_increment = -np.inf
    for c in (0.5, 1.0, 2.5):
        vals = gamma_ratio(xs, c)
        worst_increment = max(worst_increment, float(np.max(np.diff(vals))))
    # digamma sandwich used in the monotonicity argument
    psi = digamma(xs)
    lower = np.log(xs) - 1.0 / xs
    upper = np.log(xs) - 0.5 / xs
    sandwich = float(min(np.min(psi - lower), np.min(upper - psi)))
    diff_ok = True
    for c in (0.5, 1.0, 2.5):
        d = digamma(xs) - digamma(xs + c)
        lo = -np.log1p(c / xs) - c / (xs * (xs + c))
        hi = -np.log1p(c / xs) - c / (2 * xs * (xs + c))
        diff_ok &= bool(np.all(d >= lo - 1e-14) and np.all(d <= hi + 1e-14) and np.all(d < 0))
    return [
        Check(
            "A.14",
            worst_increment < 0,
            max(worst_increment, 0.0),
            measured=worst_increment,
            note="largest increment of Gamma(x)/Gamma(x+c), c in {0.5,1,2.5}",
        ),
        Check("A.16", diff_ok, 0.0 if diff_ok else 1.0, note="psi(x)-psi(x+c) bracket"),
        Check("A.17", sandwich >= -1e-14, max(-sandwich, 0.0), measured=sandwich, note="smallest margin"),
    ]


def verify_appendix_identities(tolerance: float = 1e-10) -> ConformanceReport:
    """Evaluate both sides of the beta/gamma identities on fixed parameter grids.

    Failures are recorded in the report, never raised.
    """
    if not tolerance > 0:
        raise DomainError("tolerance must be positive")
    report = ConformanceReport("specfun")
    for c in _limit_check(tolerance) + _a11_checks(tolerance) + _a12_a13_checks(tolerance) + _a14_checks():
        report.add(c)
    return report
