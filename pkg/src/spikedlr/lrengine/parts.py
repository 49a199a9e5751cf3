"""Laplace form of the likelihood ratio.

L = sqrt(pi p)/(2 pi i) int exp(-p f(z)) g(z) dz with

    f = f_I + f_II(z) + f_III(z),    g = g_I g_II(z) g_III(z).

f_I and g_I collect the Gamma-function prefactor, f_II and g_II the product
prod (z - lambda_j)^(-1/2) split against the limit law, and f_III, g_III the
scalar hypergeometric function.  For REG0, REG and CCA the last pair comes
from the uniform approximations in ``specfun``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from ..ensembles import Case, CaseSpec, EigenSample
from ..errors import DomainError
from ..spectra import LimitLaw, law_for, log_potential
from ..specfun import AsymParams, log_Cm, log_stirling_Cm, saddle_j, saddle_phi0
from .params import LRParams, check_theta, lr_params, ratios, saddle_z0

__all__ = ["LaplaceParts", "laplace_parts", "two_f_I", "g_I_leading", "eigenvalues_of"]


def eigenvalues_of(sample) -> np.ndarray | None:
    """Descending eigenvalues from an EigenSample or array; None for a law."""
    if sample is None or isinstance(sample, LimitLaw):
        return None
    if isinstance(sample, EigenSample):
        vals = sample.values
    else:
        vals = sample
    vals = np.sort(np.asarray(vals, dtype=float))[::-1]
    if not np.all(np.isfinite(vals)):
        raise DomainError("eigenvalues must be finite")
    return vals


def two_f_I(spec: CaseSpec, theta: float) -> float:
    """2 f_I of the case."""
    c1, c2, r2, _ = ratios(spec)
    th = theta
    case = spec.case
    if case is Case.SMD:
        return 1.0 + th**2 / 2.0 + math.log(th)
    if case in (Case.PCA, Case.SigD):
        base = 1.0 + (1.0 - c1) / c1 * math.log1p(th) + math.log(th / c1)
    else:
        base = 1.0 + (th + c1) / c1 + math.log(th / c1) + (1.0 - c1) / c1 * math.log1p(-c1)
    if case in (Case.PCA, Case.REG0):
        return base
    two_sample = (base - 1.0 + math.log((c1 + c2) / c1)
                  - r2 / (c1 * c2) * math.log(r2 / (c1 + c2)))
    if case is not Case.CCA:
        return two_sample
    ell = 1.0 + (1.0 + th) * c2 / c1
    return two_sample - 1.0 - th / c1 - r2 / (c1 * c2) * math.log(r2 / (c1 * ell))


def g_I_leading(spec: CaseSpec, theta: float) -> float:
    """Leading-order g_I (without its 1 + o(1) factor)."""
    c1, c2, r2, r = ratios(spec)
    th = theta
    case = spec.case
    if case is Case.SMD:
        return th
    if case is Case.PCA:
        return th / (c1 * (1.0 + th))
    if case is Case.SigD:
        return th / (c1**2 * (1.0 + th)) * r * math.sqrt(c1 + c2)
    if case is Case.REG0:
        return th / (c1 * math.sqrt(1.0 - c1))
    if case is Case.REG:
        return th / (c1**2 * math.sqrt(1.0 - c1)) * r * math.sqrt(c1 + c2)
    ell = 1.0 + (1.0 + th) * c2 / c1
    return th / (c1**3 * math.sqrt(1.0 - c1)) * r2 * (c1 + c2) / ell


@dataclass
class LaplaceParts:
    """Components of f and g for one (spec, theta) and eigenvalue set.

    ``lam`` is None when the eigenvalues are replaced by the limit law, in
    which case g_II = 1.  ``g_II_unity`` records the event lambda_1 >= z0,
    where g_II is also set to one.
    """

    spec: CaseSpec
    theta: float
    params: LRParams
    law: LimitLaw
    z0: float
    fI: float
    log_gI: float
    lam: np.ndarray | None = None
    asym: AsymParams | None = None
    g_II_unity: bool = False
    _j: int = field(default=-1, repr=False)

    @property
    def gI(self) -> float:
        return math.exp(self.log_gI)

    # -- f_II, g_II ---------------------------------------------------------

    def f_II(self, z):
        return 0.5 * log_potential(self.law, z)

    def log_g_II(self, z) -> complex:
        if self.lam is None or self.g_II_unity:
            return 0.0
        z = complex(z)
        p = self.spec.p
        total = complex(np.sum(np.log(z - self.lam + 0j)))
        return -0.5 * (total - p * complex(log_potential(self.law, z)))

    # -- f_III, g_III -------------------------------------------------------

    def _kappa(self):
        c1 = self.spec.c1
        return (1.0 - c1) / c1

    def two_f_III(self, z) -> complex:
        z = complex(z)
        c1, c2, r2, _ = ratios(self.spec)
        th = self.theta
        case = self.spec.case
        if case is Case.SMD:
            return -z * th
        if case is Case.PCA:
            return -z * th / (c1 * (1.0 + th))
        if case is Case.SigD:
            return r2 / (c1 * c2) * cmath.log(1.0 - c2 * z * th / (c1 * (1.0 + th)))
        if case is Case.REG0:
            _, ph = saddle_phi0(self.asym.eta(0, z))
            return self._kappa() * ph
        eps = self.asym.eps
        sd = saddle_j(self._j, eps, self.asym.eta(self._j, z))
        xlx = (eps - 1.0) * math.log(eps - 1.0)
        return self._kappa() * (sd.phi + eps * math.log(eps) - xlx)

    def f_III(self, z) -> complex:
        return 0.5 * self.two_f_III(z)

    def two_f_III_deriv(self, z) -> complex:
        """d(2 f_III)/dz; the saddle condition removes dt/deta terms."""
        z = complex(z)
        c1, c2, r2, _ = ratios(self.spec)
        th = self.theta
        case = self.spec.case
        if case is Case.SMD:
            return -th
        if case is Case.PCA:
            return -th / (c1 * (1.0 + th))
        if case is Case.SigD:
            k = c2 * th / (c1 * (1.0 + th))
            return -r2 / (c1 * c2) * k / (1.0 - k * z)
        j = 0 if case is Case.REG0 else self._j
        deta = self.asym.eta(j, 1.0)
        eta = self.asym.eta(j, z)
        if j == 0:
            t0, _ = saddle_phi0(eta)
            return self._kappa() * (-1.0 / t0) * deta
        sd = saddle_j(j, self.asym.eps, eta)
        if j == 1:
            return self._kappa() * (-sd.t) * deta
        return self._kappa() * (-self.asym.eps * sd.t / (1.0 - eta * sd.t)) * deta

    def log_g_III(self, z) -> complex:
        z = complex(z)
        c1, c2, r2, _ = ratios(self.spec)
        th = self.theta
        case = self.spec.case
        if case in (Case.SMD, Case.PCA):
            return 0.0
        if case is Case.SigD:
            return -cmath.log(1.0 - c2 * z * th / (c1 * (1.0 + th)))
        if case is Case.REG0:
            return -0.25 * cmath.log(1.0 + 4.0 * self.asym.eta(0, z))
        m, eps = self.asym.m, self.asym.eps
        sd = saddle_j(self._j, eps, self.asym.eta(self._j, z))
        # exact C_m over its Stirling form
        cm_ratio = log_Cm(m, eps) - log_stirling_Cm(m, eps)
        return (0.5 * math.log(c1 / r2) - 0.5j * sd.omega - 0.5 * math.log(abs(sd.phi2))
                + cmath.log(sd.psi) + cm_ratio)

    # -- totals -------------------------------------------------------------

    def f(self, z):
        """f with the limit-law f_II."""
        return self.fI + self.f_II(z) + self.f_III(z)

    def f_deriv(self, z) -> complex:
        """f'(z) = -m(z)/2 + f_III'(z) with m the Stieltjes transform."""
        from ..spectra import stieltjes
        return -0.5 * stieltjes(self.law, z) + 0.5 * self.two_f_III_deriv(z)

    def log_g(self, z) -> complex:
        return self.log_gI + self.log_g_II(z) + self.log_g_III(z)


def laplace_parts(spec: CaseSpec, theta: float, sample=None) -> LaplaceParts:
    """Build the Laplace-form components.

    ``sample`` is an EigenSample, an array of eigenvalues, a LimitLaw or None
    (the last two meaning g_II = 1).
    """
    check_theta(spec, theta)
    prm = lr_params(spec, theta)
    law = law_for(spec)
    z0 = saddle_z0(spec, theta)
    p = spec.p
    fI = 0.5 * two_f_I(spec, theta)
    log_gI = prm.log_prefactor - 0.5 * math.log(math.pi * p) + p * fI
    lam = eigenvalues_of(sample)
    if lam is not None and lam.size != p:
        raise DomainError(f"expected {p} eigenvalues, got {lam.size}")
    asym = None
    j = -1
    if spec.case in (Case.REG0, Case.REG, Case.CCA):
        asym = AsymParams.from_dims(p, spec.n1, spec.n2 if spec.case.two_sample else None, theta)
        j = {Case.REG0: 0, Case.REG: 1, Case.CCA: 2}[spec.case]
    unity = bool(lam is not None and lam[0] >= z0)
    return LaplaceParts(spec, float(theta), prm, law, z0, fI, log_gI, lam, asym, unity, j)
