"""Direct evaluation of the contour-integral representation of L.

L = Gamma(s+1) alpha q_s / (Psi11^s 2 pi i) int_K pFq(a-s, b-s; Psi11 z)
    prod (z - lambda_j)^(-1/2) dz,

integrated along the upper half K+ of the steep-descent contour:
by conjugate symmetry L = prefactor * Im(int_{K+} h dz) / pi.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from functools import lru_cache

import mpmath
import numpy as np
from scipy import integrate

from ..ensembles import Case, CaseSpec
from ..errors import DomainError, ToleranceError, UnsupportedScaleError
from ..specfun import log_hyp_series
from .contour import ContourSpec, contour
from .params import lr_params, saddle_z0
from .parts import eigenvalues_of

__all__ = ["QuadResult", "lr_quadrature", "log_integrand", "MAX_SERIES_P"]

# largest dimension accepted for the cases that need series hypergeometrics
MAX_SERIES_P = 64
# K2 is cut where |integrand| falls below this fraction of its peak
TAIL_CUT = 1e-18
EPSREL = 1e-10


@dataclass
class QuadResult:
    log_value: float
    sign: float
    anchor: float
    flags: dict = field(default_factory=dict)
    evaluations: int = 0

    @property
    def value(self) -> float:
        return self.sign * math.exp(self.log_value)


@lru_cache(maxsize=200_000)
def _log_pfq_cached(kind, a, b, x):
    try:
        return log_hyp_series(kind, a, b, x), False
    except DomainError:
        if kind != "2F1":
            raise
    # beyond the reach of the series (or its Pfaff image)
    with mpmath.workdps(30):
        v = mpmath.hyp2f1(a[0], a[1], b, x)
        return complex(mpmath.log(v)), True


class _Integrand:
    def __init__(self, spec: CaseSpec, theta: float, lam: np.ndarray):
        self.prm = lr_params(spec, theta)
        self.lam = lam
        self.s = self.prm.s
        self.a = tuple(float(x - self.s) for x in self.prm.a)
        self.b = tuple(float(x - self.s) for x in self.prm.b)
        self.kind = self.prm.kind
        self.fallbacks = 0
        self.calls = 0

    def log_f(self, z: np.ndarray) -> np.ndarray:
        x = self.prm.psi11 * z
        if self.kind == "0F0":
            return x
        if self.kind == "1F0":
            return -self.a[0] * np.log(1.0 - x)
        out = np.empty(x.shape, dtype=complex)
        for i, xi in enumerate(x.ravel()):
            v, fb = _log_pfq_cached(self.kind, self.a, self.b[0], complex(xi))
            out.ravel()[i] = v
            self.fallbacks += fb
        return out

    def __call__(self, z) -> np.ndarray:
        z = np.atleast_1d(np.asarray(z, dtype=complex))
        self.calls += z.size
        logs = np.log(z[:, None] - self.lam[None, :])
        return self.log_f(z) - 0.5 * logs.sum(axis=1)


def log_integrand(spec: CaseSpec, theta: float, sample, z):
    """log of pFq(a-s, b-s; Psi11 z) prod (z - lambda_j)^(-1/2)."""
    return _Integrand(spec, theta, eigenvalues_of(sample))(z)


def _tail_length(fn, seg, ref, scale):
    """Arc length beyond which the integrand on ``seg`` is negligible."""
    u = scale
    for _ in range(200):
        v = fn(seg.z(np.array([u])))[0].real - ref + math.log(abs(seg.dz(np.array([u]))[0]))
        if v < math.log(TAIL_CUT):
            return u
        u *= 1.5
    raise ToleranceError("integrand does not decay along the contour tail")


def _integrate_segment(fn, seg, lo, hi, ref, epsabs):
    def g(u):
        z = seg.z(np.array([u]))
        val = np.exp(fn(z)[0] - ref) * seg.dz(np.array([u]))[0]
        return np.array([val.real, val.imag])

    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        res, err = integrate.quad_vec(g, lo, hi, epsabs=epsabs, epsrel=EPSREL, norm="max",
                                      limit=4000)
    if err > max(10 * epsabs, 1e-6 * np.max(np.abs(res))):
        raise ToleranceError(f"contour quadrature error estimate {err:.2e} too large")
    return complex(res[0], res[1])


def _default_anchor(spec, theta, lam):
    z0 = saddle_z0(spec, theta, check=False)
    if lam[0] < z0:
        return z0, False
    from ..spectra import law_for
    gap = z0 - law_for(spec).support[1]
    a = lam[0] + max(gap, 1e-3 * max(1.0, abs(lam[0])))
    if spec.case in (Case.SigD, Case.CCA):
        cut = 1.0 / lr_params(spec, theta).psi11
        if a >= cut:
            a = 0.5 * (lam[0] + cut)
    return a, True


def lr_quadrature(spec: CaseSpec, theta: float, sample, *, anchor: float | None = None,
                  check_symmetry: bool = True) -> QuadResult:
    """L(theta; Lambda) by numerical integration along the deformed contour.

    If lambda_1 lies beyond z0 the contour is moved to cross the real axis
    past lambda_1 (flag ``reanchored``); the integral is unchanged by the move.
    Any theta > 0 is accepted, including values above the threshold.
    """
    lam = eigenvalues_of(sample)
    if lam is None or lam.size != spec.p:
        raise DomainError("lr_quadrature needs the p eigenvalues")
    if theta <= 0:
        raise DomainError("theta must be positive")
    if spec.case in (Case.REG0, Case.REG, Case.CCA) and spec.p > MAX_SERIES_P:
        raise UnsupportedScaleError(
            f"series evaluation limited to p <= {MAX_SERIES_P}, got p={spec.p}")
    flags = {}
    if anchor is None:
        anchor, moved = _default_anchor(spec, theta, lam)
        flags["reanchored"] = moved
    elif anchor <= lam[0]:
        raise DomainError("contour anchor must exceed the largest eigenvalue")
    cs: ContourSpec = contour(spec, theta, anchor, check=False)
    fn = _Integrand(spec, theta, lam)
    ref = fn(np.array([anchor + 0j]))[0].real
    scale = cs.segments[0].length
    total = 0j
    for seg in cs.segments:
        hi = seg.length
        if not math.isfinite(hi):
            hi = _tail_length(fn, seg, ref, scale)
        # panels that double in length keep the tail panels balanced
        edges = [0.0]
        step = min(hi, scale)
        while edges[-1] < hi:
            edges.append(min(hi, edges[-1] + step))
            step *= 2.0
        for lo_, hi_ in zip(edges[:-1], edges[1:]):
            total += _integrate_segment(fn, seg, lo_, hi_, ref, 1e-15 * scale)
    if check_symmetry:
        zs = cs.segments[0].z(np.array([0.25, 0.5, 0.75]) * cs.segments[0].length)
        up = fn(zs)
        down = fn(np.conj(zs))
        resid = np.max(np.abs(np.exp(down - np.conj(up)) - 1.0))
        if resid > 1e-8:
            raise ToleranceError(f"integrand breaks conjugate symmetry ({resid:.2e})")
    im = total.imag
    if im == 0:
        raise ToleranceError("integral vanished")
    log_val = fn.prm.log_prefactor + ref + math.log(abs(im)) - math.log(math.pi)
    flags["series_fallbacks"] = fn.fallbacks
    return QuadResult(log_val, math.copysign(1.0, im), anchor, flags, fn.calls)
