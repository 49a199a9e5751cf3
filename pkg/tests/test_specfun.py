import cmath
import math
import warnings

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from spikedlr.errors import BranchCutError, DomainError, DomainWarning
from spikedlr.specfun import (AsymParams, approx_0F1, hyp_series, in_omega, in_omega0, log_Cm,
                              log_approx_0F1, log_approx_Fj, log_hyp_series, log_stirling_Cm,
                              saddle_j, saddle_phi0, stirling_Cm)

from . import oracles


def _rel(log_a, log_b):
    return abs(np.expm1(log_a - log_b))


def _phi(j, eps, eta, t):
    if j == 1:
        return -eta * t - eps * cmath.log(t) + (eps - 1) * cmath.log(t - 1)
    return -eps * cmath.log(t / (1 - eta * t)) + (eps - 1) * cmath.log(t - 1)


class TestSeries:
    def test_trivial_values(self):
        assert hyp_series("0F1", (), 3.5, 0.0) == 1.0
        assert abs(hyp_series("1F1", (2.0,), 2.0, 1 + 1j) - cmath.exp(1 + 1j)) < 1e-13
        assert hyp_series("2F1", (1.0, 1.0), 2.0, 0.5).real == pytest.approx(
            oracles.HYP2F1_11_2_HALF, rel=1e-14)

    @pytest.mark.parametrize("kind,a,b,z", [
        ("0F1", (), 2.5, 40 + 30j),
        ("0F1", (), 11.0, -300.0),
        ("1F1", (3.2,), 1.7, -25 + 4j),
        ("1F1", (101.0,), 51.0, 40 - 10j),
        ("2F1", (1.5, 2.5), 3.5, -0.7 + 0.3j),
        ("2F1", (41.0, 41.0), 21.0, -3.0 + 1.0j),
    ])
    def test_against_mpmath(self, kind, a, b, z):
        with mpmath.workdps(40):
            ref = complex(mpmath.log(mpmath.hyper(list(a), [b], z)))
        got = log_hyp_series(kind, a, b, z)
        assert abs(got.real - ref.real) < 1e-11 * max(1.0, abs(ref.real))
        assert abs(cmath.exp(1j * (got.imag - ref.imag)) - 1) < 1e-10

    def test_branch_cut(self):
        with pytest.raises(BranchCutError):
            log_hyp_series("2F1", (1.0, 1.0), 2.0, 1.5)

    def test_reach(self):
        with pytest.raises(DomainError):
            log_hyp_series("2F1", (1.0, 1.0), 2.0, 0.5 + 1.0j)

    def test_bad_lower_parameter(self):
        with pytest.raises(DomainError):
            log_hyp_series("1F1", (1.0,), -2.0, 0.5)

    @given(st.floats(0.5, 20), st.floats(-30, 30), st.floats(-30, 30))
    @settings(max_examples=40, deadline=None)
    def test_kummer_transformation(self, a, x, y):
        b = a + 1.3
        z = complex(x, y)
        lhs = log_hyp_series("1F1", (a,), b, z)
        rhs = z + log_hyp_series("1F1", (b - a,), b, -z)
        assert abs(lhs.real - rhs.real) < 1e-9 * max(1.0, abs(lhs.real))


class TestSaddle0:
    def test_values(self):
        t0, ph = saddle_phi0(0.0)
        assert t0 == 1.0 and ph == 0.0
        t0, ph = saddle_phi0(2.0)
        assert t0 == pytest.approx(2.0)
        assert ph.real == pytest.approx(oracles.PHI0_AT_2, abs=1e-14)

    def test_stationary(self):
        eta = 0.7 + 0.3j
        t0, _ = saddle_phi0(eta)
        h = 1e-6

        def phi(t):
            return cmath.log(t) - t - eta / t + 1

        assert abs((phi(t0 + h) - phi(t0 - h)) / (2 * h)) < 1e-8

    def test_cut(self):
        with pytest.raises(DomainError):
            saddle_phi0(-0.5)

    def test_zero_limit(self):
        assert approx_0F1(100.0, 1e-14) == pytest.approx(1.0, abs=1e-10)

    def test_error_at_m200(self):
        m = 200.0
        ref = log_hyp_series("0F1", (), m + 1, m * m * 0.5)
        assert _rel(log_approx_0F1(m, 0.5), ref) <= 1e-2

    def test_error_decreases(self):
        eta = 0.3 * cmath.exp(0.25j * math.pi)
        errs = [_rel(log_approx_0F1(m, eta), log_hyp_series("0F1", (), m + 1, m * m * eta))
                for m in (50, 100, 200, 400)]
        assert all(a > b for a, b in zip(errs, errs[1:]))

    def test_region(self):
        assert in_omega0(1j) and not in_omega0(-1 + 0.01j)


class TestSaddleJ:
    def test_t1_value(self):
        assert saddle_j(1, 2.0, 1.0).t == pytest.approx(oracles.T1_EPS2_ETA1, abs=1e-14)

    def test_eta_zero_limit(self):
        assert saddle_j(1, 3.0, 0.0).t == pytest.approx(3.0)
        assert saddle_j(2, 3.0, 0.0).t == pytest.approx(3.0)

    @pytest.mark.parametrize("j,eps,eta", [(1, 2.0, 1e-7), (1, 1.5, 0.4 - 0.8j), (2, 2.0, 0.25),
                                           (2, 3.0, -0.5 + 0.3j), (1, 5.0, -2.0 + 0.1j)])
    def test_stationary(self, j, eps, eta):
        sd = saddle_j(j, eps, eta)
        h = 1e-6
        d = (_phi(j, eps, eta, sd.t + h) - _phi(j, eps, eta, sd.t - h)) / (2 * h)
        assert abs(d) < 1e-8
        assert sd.phi == pytest.approx(_phi(j, eps, eta, sd.t), abs=1e-12)

    @given(st.floats(1.1, 8.0), st.floats(-3, 3), st.floats(-3, 3))
    @settings(max_examples=60, deadline=None)
    def test_steepest_descent_branch(self, eps, x, y):
        eta = complex(x, y)
        if not in_omega(1, eps, eta, 0.1):
            return
        sd = saddle_j(1, eps, eta)
        assert abs(sd.omega + 2 * sd.omega0) <= math.pi / 2 + 1e-9

    def test_cut_for_j2(self):
        with pytest.raises(BranchCutError):
            saddle_j(2, 2.0, 1.5)

    def test_eps_guard(self):
        with pytest.raises(DomainError):
            saddle_j(1, 0.9, 0.5)


class TestApproximations:
    def test_F1_at_m200(self):
        m, eps, eta = 200.0, 2.0, 0.8
        ref = log_hyp_series("1F1", (m * eps + 1,), m + 1, m * eta)
        assert _rel(log_approx_Fj(1, m, eps, eta), ref) <= 1e-2

    def test_F2_at_m150(self):
        m, eps, eta = 150.0, 2.0, 0.3
        a = m * eps + 1
        ref = log_hyp_series("2F1", (a, a), m + 1, eta)
        assert _rel(log_approx_Fj(2, m, eps, eta), ref) <= 1e-2

    def test_near_zero(self):
        errs = []
        for m in (50, 200):
            ref = log_hyp_series("1F1", (2 * m + 1,), m + 1, m * 1e-6)
            errs.append(_rel(log_approx_Fj(1, m, 2.0, 1e-6), ref))
        assert errs[1] < errs[0] < 1e-2

    def test_warning_outside_region(self):
        with warnings.catch_warnings(record=True) as rec:
            warnings.simplefilter("always")
            log_approx_Fj(1, 50.0, 2.0, -5.0 + 0.01j)
        assert any(issubclass(w.category, DomainWarning) for w in rec)


class TestStirling:
    def test_against_log_gamma(self):
        assert abs(stirling_Cm(200.0, 2.0) / math.exp(log_Cm(200.0, 2.0)) - 1) <= 5e-3

    def test_consistent_with_dimensions(self):
        # m = (n1-p)/2, eps = (n-p)/(n1-p): prefactor sqrt(pi p (1-c1))/r
        p, n1, n2 = 200, 600, 800
        m, eps = 0.5 * (n1 - p), (n1 + n2 - p) / (n1 - p)
        c1, c2 = p / n1, p / n2
        r = math.sqrt(c1 + c2 - c1 * c2)
        x = eps - 1
        alt = 0.5 * math.log(math.pi * p * (1 - c1)) - math.log(r) + m * x * math.log(x) - m * eps * math.log(eps)
        assert log_stirling_Cm(m, eps) == pytest.approx(alt, rel=1e-12)

    def test_monotone(self):
        errs = [abs(log_stirling_Cm(m, 2.0) - log_Cm(m, 2.0)) for m in (50, 100, 200, 400)]
        assert all(a > b for a, b in zip(errs, errs[1:]))

    def test_eps_one_limit(self):
        assert math.isinf(log_stirling_Cm(100.0, 1.0))
        assert math.isfinite(log_stirling_Cm(100.0, 1.0 + 1e-12))


class TestAsymParams:
    def test_from_dims(self):
        a = AsymParams.from_dims(20, 80, 40, 0.5)
        assert a.m == 30 and a.eps == pytest.approx(100 / 60)
        assert a.eta(0, 2.0) == pytest.approx(2.0 * 0.5 / 0.75**2)

    def test_bad_index(self):
        with pytest.raises(DomainError):
            AsymParams.from_dims(20, 80, 40, 0.5).eta(3, 1.0)
