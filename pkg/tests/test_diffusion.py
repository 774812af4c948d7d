import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from renyi_maxent import diffusion
from renyi_maxent.errors import BracketError, DomainError, EntropyUndefinedError
from renyi_maxent.numerics import StencilSpec

# Independent oracle for the porous-medium constants in d = 1.


def _mp_constants(alpha):
    alpha = mpmath.mpf(alpha)
    beta = (alpha - 1) / (2 * alpha + (alpha - 1))
    k = 1 / (alpha - 1)
    A = 1 / (2 * mpmath.quad(lambda x: max(1 - beta * x * x, 0) ** k, [0, 1 / mpmath.sqrt(beta)]))
    gamma = 1 / (2 + (alpha - 1))
    kappa = (alpha - 1) * gamma / (2 * alpha)
    # mass of (C - kappa x^2)_+^k equals 1
    unit = 2 * mpmath.quad(lambda y: (1 - y * y) ** k, [0, 1])
    C = (1 / (unit / mpmath.sqrt(kappa))) ** (1 / (k + mpmath.mpf(1) / 2))
    return A, C


class TestThreshold:
    def test_root_against_mpmath(self):
        res = diffusion.threshold_alpha(1)
        ref = mpmath.findroot(lambda a: _mp_constants(a)[1] - _mp_constants(a)[0], (1.5, 3.0), solver="bisect")
        assert res.alpha_th == pytest.approx(float(ref), abs=1e-10)
        assert res.alpha_th == pytest.approx(2.1006249806, abs=1e-9)

    def test_companion_root(self):
        res = diffusion.threshold_alpha(1)
        assert res.companion_supnorm_root == pytest.approx(1.7668792272, abs=1e-9)

    def test_two_dimensions(self):
        res = diffusion.threshold_alpha(2)
        assert res.alpha_th == pytest.approx(2.875972, abs=1e-6)
        assert res.companion_supnorm_root == pytest.approx(1.370214, abs=1e-6)

    def test_three_dimensions_no_bracket(self):
        with pytest.raises(BracketError) as info:
            diffusion.threshold_alpha(3)
        assert "no sign change" in str(info.value)

    @pytest.mark.parametrize("d,tol", [(4, 1e-12), (1, 0.0)])
    def test_invalid(self, d, tol):
        with pytest.raises(DomainError):
            diffusion.threshold_alpha(d, tol)

    def test_to_dict(self):
        assert list(diffusion.threshold_alpha(1).to_dict()) == ["d", "alpha_th", "iterations", "companion_supnorm_root"]

    def test_supnorm_orderings(self):
        assert diffusion.supnorm_compare(0.75).sign == -1
        assert diffusion.supnorm_compare(2.2).sign == 1


class TestResidual:
    @pytest.mark.parametrize("family", diffusion.FAMILIES)
    @pytest.mark.parametrize("alpha,d,t", diffusion.RESIDUAL_CASES + ((1.0, 3, 0.7), (1.5, 3, 2.0)))
    def test_second_order(self, family, alpha, d, t):
        rep = diffusion.pde_residual(family, alpha, d, t)
        assert rep.residual_norms[-1] < 1e-6
        assert rep.observed_order == pytest.approx(2.0, abs=0.1)

    def test_fourth_order_stencil(self):
        rep = diffusion.pde_residual("zkb", 2.2, 1, 1.0, StencilSpec(4, 1e-2))
        assert rep.observed_order == pytest.approx(4.0, abs=0.2)

    def test_residual_sensitive_to_constant(self):
        # with K replaced by 1 the maxent family leaves an O(1) residual
        alpha, t, h = 0.75, 1.0, 1e-5
        r = np.linspace(0.0, 3.0, 13)
        shape = diffusion._profile("maxent", alpha, 1, t).shape()
        lap = shape.power(alpha).laplacian(r, 1)
        ft = (diffusion._profile("maxent", alpha, 1, t + h).shape()(r) - diffusion._profile("maxent", alpha, 1, t - h).shape()(r)) / (2 * h)
        K = diffusion._family_K("maxent", alpha, 1)
        scale = np.max(np.abs(lap))
        assert np.max(np.abs(K * ft - lap)) / scale < 1e-8
        assert np.max(np.abs(ft - lap)) / scale > 0.1

    def test_compact_support_skips_edge(self):
        rep = diffusion.pde_residual("zkb", 2.2, 1, 1.0)
        assert rep.skipped >= 0
        assert set(rep.to_dict()) >= {"family", "residual_norms", "observed_order"}

    @pytest.mark.parametrize("t,stencil", [(0.0, None), (1e-4, StencilSpec(2, 1e-4))])
    def test_bad_time(self, t, stencil):
        with pytest.raises(DomainError):
            diffusion.pde_residual("zkb", 2.2, 1, t, stencil)


class TestIdentities:
    @pytest.mark.parametrize("alpha,d,t", diffusion.IDENTITY_CASES)
    def test_hard_checks(self, alpha, d, t):
        rep = diffusion.derivative_identities(alpha, d, t)
        assert rep.ok, rep.failures

    def test_printed_prefactor_is_half(self):
        rep = diffusion.derivative_identities(0.75, 1, 1.0)
        c = [c for c in rep.checks if c.name.startswith("5.12 printed")][0]
        assert c.soft and c.deviation == pytest.approx(0.5, abs=1e-8)

    def test_printed_sign_of_fisher_derivative_off(self):
        rep = diffusion.derivative_identities(1.5, 1, 1.0)
        ok = [c for c in rep.checks if c.name.startswith("5.14b dI/dt with")][0]
        printed = [c for c in rep.checks if c.name.startswith("5.14b printed")][0]
        assert ok.passed and not printed.passed and printed.soft

    @settings(max_examples=10, deadline=None)
    @given(st.floats(0.7, 3.0), st.floats(0.5, 3.0))
    def test_entropy_rate(self, alpha, t):
        # H(t) = H(1) + delta ln t along the self-similar family
        gamma = 1 / (2 + (alpha - 1))
        dH = diffusion._time_derivative(lambda s: diffusion._entropy_at(alpha, 1, s), t, 1e-3 * t)
        assert dH == pytest.approx(gamma / t, rel=1e-6)


class TestConcavity:
    @pytest.mark.parametrize("alpha", diffusion.CONCAVITY_ALPHAS + (1.0,))
    def test_entropy_power_linear(self, alpha):
        times = [0.5, 1.0, 2.0, 4.0]
        rep = diffusion.entropy_power_concavity(alpha, 1, times)
        assert rep.passed
        assert rep.eq56_max_deviation <= 1e-6

    def test_criterion_zero_at_one(self):
        res = diffusion.concavity_integral_criterion(1.0, 1)
        assert res.value == 0.0 and res.passed

    @pytest.mark.parametrize("alpha,expected", [(0.75, -4.159), (0.9, -0.690), (1.5, 0.430), (2.2, 0.204)])
    def test_criterion_values(self, alpha, expected):
        assert diffusion.concavity_integral_criterion(alpha, 1).value == pytest.approx(expected, abs=1e-3)

    def test_criterion_undefined_below_window(self):
        with pytest.raises(EntropyUndefinedError) as info:
            diffusion.concavity_integral_criterion(0.55, 1)
        assert "window" in str(info.value)

    def test_constant(self):
        assert diffusion.criterion_constant(0.75, 1) == pytest.approx(64 / 27)

    def test_bad_times(self):
        with pytest.raises(DomainError):
            diffusion.entropy_power_concavity(1.5, 1, [1.0, 0.5, 2.0])


class TestPointwise:
    @pytest.mark.parametrize("alpha,d", [(0.75, 1), (1.5, 1), (2.2, 2), (0.9, 3), (1.0, 2)])
    def test_exact_solutions_satisfy_bounds(self, alpha, d):
        assert diffusion.pointwise_bounds(alpha, d, 1.3).ok

    def test_bounds_saturated_at_center(self):
        rep = diffusion.pointwise_bounds(2.2, 1, 1.0)
        assert rep[f"Aronson-Benilan on source solution [alpha=2.2, d=1, t=1]"].measured == pytest.approx(0.0, abs=1e-12)
        assert rep["Li-Yau on heat kernel [d=1, t=1]"].measured == pytest.approx(0.0, abs=1e-12)


class TestSuite:
    def test_verify_diffusion(self):
        rep = diffusion.verify_diffusion()
        assert rep.ok
        assert any(c.soft and not c.passed for c in rep.checks)
