import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate

from spikedlr.ensembles import CaseSpec
from spikedlr.errors import DomainError
from spikedlr.spectra import (LimitLaw, cdf, density, f2_closed, law_for, log_potential,
                              lss_expectation, stieltjes, stieltjes_deriv, support, threshold)

from . import oracles

SC = LimitLaw("SC")
MP = LimitLaw("MP", 0.5)
W = LimitLaw("W", 0.5, 0.5)

ratios = st.floats(0.05, 0.95)


class TestSupportAndThreshold:
    def test_semicircle(self):
        assert support(SC) == (-2.0, 2.0)
        assert threshold(SC) == 1.0

    def test_mp(self):
        np.testing.assert_allclose(support(MP), oracles.SUPPORT_MP_05, rtol=1e-14)
        assert threshold(MP) == pytest.approx(oracles.THRESHOLD_MP_05, rel=1e-14)

    def test_wachter(self):
        assert support(W)[1] == pytest.approx(oracles.BETA_PLUS_W_05, rel=1e-14)
        assert threshold(LimitLaw("W", 0.9, 0.9)) == pytest.approx(oracles.THRESHOLD_W_09, rel=1e-14)

    def test_wachter_c2_zero_is_mp(self):
        assert support(LimitLaw("W", 0.3, 0.0)) == support(LimitLaw("MP", 0.3))

    @given(ratios, ratios)
    @settings(max_examples=50, deadline=None)
    def test_wachter_lower_edge_nonnegative(self, c1, c2):
        lo, hi = support(LimitLaw("W", c1, c2))
        assert 0.0 <= lo < hi

    def test_bad_parameters(self):
        with pytest.raises(DomainError):
            LimitLaw("MP", 1.2)
        with pytest.raises(DomainError):
            LimitLaw("XX")


class TestDensity:
    def test_values(self):
        assert density(SC, 0.0) == pytest.approx(oracles.DENSITY_SC_0, rel=1e-14)
        assert density(MP, 1.0) == pytest.approx(oracles.DENSITY_MP_05_AT_1, rel=1e-14)

    @pytest.mark.parametrize("law", [SC, MP, W, LimitLaw("W", 0.9, 0.9)])
    def test_vanishes_at_edges(self, law):
        lo, hi = support(law)
        assert density(law, hi) == 0.0 and density(law, lo) == 0.0

    @pytest.mark.parametrize("law", [SC, MP, W, LimitLaw("W", 0.2, 0.7)])
    def test_integrates_to_one(self, law):
        lo, hi = support(law)
        val, _ = integrate.quad(lambda x: density(law, x), lo, hi, limit=200)
        assert val == pytest.approx(1.0, abs=1e-8)

    @pytest.mark.parametrize("law", [SC, MP, W])
    def test_cdf_matches_density(self, law):
        lo, hi = support(law)
        x = lo + 0.37 * (hi - lo)
        val, _ = integrate.quad(lambda t: density(law, t), lo, x, limit=200)
        assert cdf(law, x) == pytest.approx(val, abs=1e-9)
        assert cdf(law, hi + 1.0) == 1.0 and cdf(law, lo - 1.0) == 0.0


class TestStieltjes:
    def test_values(self):
        assert stieltjes(SC, 2.5) == pytest.approx(oracles.STIELTJES_SC_25, abs=1e-14)
        assert stieltjes(MP, 3.0) == pytest.approx(oracles.STIELTJES_MP_05_3, abs=1e-14)
        assert stieltjes(W, 1.2) == pytest.approx(oracles.STIELTJES_W_05_12, abs=1e-13)

    @pytest.mark.parametrize("law,z", [(SC, 2.5), (MP, 3.0), (W, 1.2), (W, 0.4 + 0.2j),
                                       (MP, -1.0 + 0.5j)])
    def test_against_quadrature(self, law, z):
        num = lss_expectation(law, lambda x: 1.0 / (x - z))
        assert abs(num - stieltjes(law, z)) < 1e-10

    def test_derivative_value(self):
        assert stieltjes_deriv(SC, 2.5) == pytest.approx(oracles.STIELTJES_DERIV_SC_25, abs=1e-13)

    @pytest.mark.parametrize("law,z", [(MP, 3.0), (W, 1.3), (SC, 1.0 + 1.0j)])
    def test_derivative_finite_difference(self, law, z):
        h = 1e-6
        fd = (stieltjes(law, z + h) - stieltjes(law, z - h)) / (2 * h)
        assert abs(fd - stieltjes_deriv(law, z)) < 1e-6

    @pytest.mark.parametrize("law", [SC, MP, W])
    def test_decay(self, law):
        z = 1e6
        assert stieltjes(law, z) * z == pytest.approx(-1.0, rel=1e-5)
        assert abs(stieltjes_deriv(law, z)) < 1e-11

    def test_on_support_rejected(self):
        with pytest.raises(DomainError):
            stieltjes(MP, 1.0)

    @given(st.floats(-3, 3), st.floats(0.05, 3))
    @settings(max_examples=40, deadline=None)
    def test_upper_half_plane_maps_to_upper(self, x, y):
        assert stieltjes(W, complex(x, y)).imag > 0


class TestMoments:
    def test_normalization(self):
        for law in (SC, MP, W):
            assert lss_expectation(law, lambda x: 1.0) == pytest.approx(1.0, abs=1e-12)

    def test_semicircle_second_moment(self):
        assert lss_expectation(SC, lambda x: x * x) == pytest.approx(1.0, abs=1e-8)

    def test_mp_mean(self):
        assert lss_expectation(MP, lambda x: x) == pytest.approx(1.0, abs=1e-10)


class TestLogPotential:
    def test_closed_forms(self):
        assert f2_closed("SMD", 0.0, 0.0, 0.5) == pytest.approx(oracles.F2_SMD_05, rel=1e-14)
        assert f2_closed("PCA", 0.5, 0.0, 0.5) == pytest.approx(oracles.F2_PCA_05, rel=1e-14)
        assert f2_closed("SigD", 0.5, 0.5, 0.5) == pytest.approx(oracles.F2_SIGD_05_QUAD, abs=1e-12)

    def test_against_adaptive_quadrature(self):
        for law, z in ((SC, 2.5), (MP, 3.0), (W, 1.2)):
            ref = lss_expectation(law, lambda x: math.log(z - x))
            assert log_potential(law, z) == pytest.approx(ref, abs=1e-12)

    @pytest.mark.parametrize("case,dims", [("SMD", (10,)), ("PCA", (10, 40)), ("SigD", (10, 40, 20)),
                                           ("REG0", (10, 30)), ("REG", (10, 30, 25)),
                                           ("CCA", (10, 30, 25))])
    def test_closed_form_equals_potential(self, case, dims):
        from spikedlr.lrengine import saddle_z0, threshold_p

        spec = CaseSpec(case, *dims)
        for frac in (0.2, 0.6, 0.9):
            th = frac * threshold_p(spec)
            z0 = saddle_z0(spec, th)
            want = log_potential(law_for(spec), z0)
            assert f2_closed(case, spec.c1, spec.c2, th) == pytest.approx(want, abs=1e-10)

    def test_complex_branch(self):
        z = 1.0 + 0.5j
        ref = lss_expectation(MP, lambda x: np.log(z - x))
        assert abs(log_potential(MP, z) - ref) < 1e-12

    def test_domain(self):
        with pytest.raises(DomainError):
            f2_closed("PCA", 0.5, 0.0, 0.8)
