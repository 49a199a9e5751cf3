"""Scalar hypergeometric functions and their uniform saddle-point approximations.

``hyp_series`` is a plain power-series oracle for 0F1, 1F1 and 2F1 with
complex arguments.  It runs in double precision and, when the partial sums
show cancellation, re-sums the same series in extended precision with
``mpmath``.  The approximations cover

* ``F0 = 0F1(m+1; m^2 eta0)``, via the Bessel-type saddle point ``t0``;
* ``F1 = 1F1(m eps+1, m+1; m eta1)`` and
  ``F2 = 2F1(m eps+1, m eps+1; m+1; eta2)``, via the saddle points ``t1, t2``
  of the integral representations.

All approximations have ``log_`` variants since ``F`` overflows doubles for
moderate ``m``.
"""

from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass
from typing import NamedTuple

import mpmath
import numpy as np
from scipy.special import gammaln, xlogy

from .errors import (BranchCutError, BranchError, ConvergenceError, DomainError,
                     DomainWarning, UnsupportedScaleError)

__all__ = [
    "hyp_series",
    "log_hyp_series",
    "saddle_phi0",
    "approx_0F1",
    "log_approx_0F1",
    "Saddle",
    "saddle_j",
    "approx_Fj",
    "log_approx_Fj",
    "log_Cm",
    "stirling_Cm",
    "log_stirling_Cm",
    "in_omega0",
    "in_omega",
    "AsymParams",
]

MAX_TERMS = 1_000_000
STOP_RUN = 30
STOP_REL = 1e-16
# partial-sum cancellation (max |term| / |sum|) tolerated in double precision
CANCEL_LIMIT = 1e3
# 2F1 series (direct or after Pfaff) only where its argument is this small
REACH_2F1 = 0.95
_RESCALE = 1e280
_LOG_RESCALE = math.log(_RESCALE)


# --------------------------------------------------------------------------
# series


def _series_double(alist, b, z):
    """Sum of prod (a)_k / ((b)_k k!) z^k in doubles.

    Returns (log of sum, log max |term| - log |sum|, terms used).  Terms and
    sum are rescaled together to keep clear of overflow.
    """
    t = 1.0 + 0.0j
    s = 1.0 + 0.0j
    shift = 0.0
    log_tmax = 0.0
    run = 0
    for k in range(MAX_TERMS):
        num = z
        for a in alist:
            num *= a + k
        t *= num / ((b + k) * (k + 1))
        s += t
        at = abs(t)
        if at == 0.0:
            break
        if at > _RESCALE or abs(s) > _RESCALE:
            t /= _RESCALE
            s /= _RESCALE
            shift += _LOG_RESCALE
            at /= _RESCALE
        lt = math.log(at) + shift
        if lt > log_tmax:
            log_tmax = lt
        if at < STOP_REL * abs(s):
            run += 1
            if run >= STOP_RUN:
                break
        else:
            run = 0
    else:
        raise ConvergenceError(f"series did not converge in {MAX_TERMS} terms")
    if s == 0:
        return -math.inf + 0j, math.inf, k + 1
    ls = cmath.log(s) + shift
    return ls, log_tmax - ls.real, k + 1


def _series_mp(alist, b, z, prec):
    """Same series at ``prec`` bits; returns (log of sum, cancellation in log)."""
    with mpmath.workprec(prec):
        zz = mpmath.mpc(z)
        aa = [mpmath.mpc(a) for a in alist]
        bb = mpmath.mpc(b)
        t = mpmath.mpc(1)
        s = mpmath.mpc(1)
        tmax = mpmath.mpf(1)
        run = 0
        tiny = mpmath.mpf(STOP_REL)
        for k in range(MAX_TERMS):
            num = zz
            for a in aa:
                num *= a + k
            t *= num / ((bb + k) * (k + 1))
            s += t
            at = abs(t)
            if at == 0:
                break
            if at > tmax:
                tmax = at
            if at < tiny * abs(s):
                run += 1
                if run >= STOP_RUN:
                    break
            else:
                run = 0
        else:
            raise ConvergenceError(f"series did not converge in {MAX_TERMS} terms")
        if s == 0:
            raise ConvergenceError("series sum cancelled to zero")
        ls = mpmath.log(s)
        return complex(ls), float(mpmath.log(tmax) - ls.real)


def _series_log(alist, b, z):
    ls, cancel, _ = _series_double(alist, b, z)
    if cancel <= math.log(CANCEL_LIMIT):
        return ls
    # lost digits in doubles: redo with enough bits to cover the cancellation
    # (a cancelled sum underestimates the loss, so the budget grows geometrically)
    bits = 53 + int(cancel / math.log(2)) + 32
    for _ in range(12):
        ls, cancel = _series_mp(alist, b, z, bits)
        need = 53 + int(cancel / math.log(2)) + 16
        if need <= bits:
            return ls
        bits = max(2 * need, bits + 64)
    raise ConvergenceError("extended-precision resummation did not settle")


def _check_b(b):
    bc = complex(b)
    if bc.imag == 0 and bc.real <= 0 and bc.real == int(bc.real):
        raise DomainError(f"lower parameter {b} is a non-positive integer")


def log_hyp_series(kind: str, a, b, z) -> complex:
    """Logarithm of pFq(a; b; z) for pFq in {0F1, 1F1, 2F1}.

    The imaginary part is defined modulo 2 pi.  1F1 with Re z < 0 goes
    through Kummer's transformation and 2F1 outside the disc |z - 1| <= 1
    through Pfaff's, both of which reduce cancellation.  2F1 is refused
    (``DomainError``) where neither z nor z/(z-1) has modulus below
    ``REACH_2F1``.
    """
    kind = kind.upper()
    a = tuple(complex(x) for x in np.atleast_1d(a)) if kind != "0F1" else ()
    b = complex(b)
    z = complex(z)
    _check_b(b)
    if kind == "0F1":
        return _series_log((), b, z)
    if kind == "1F1":
        if len(a) != 1:
            raise DomainError("1F1 takes one upper parameter")
        if z.real < 0:
            return z + _series_log((b - a[0],), b, -z)
        return _series_log(a, b, z)
    if kind == "2F1":
        if len(a) != 2:
            raise DomainError("2F1 takes two upper parameters")
        if z.imag == 0 and z.real >= 1:
            raise BranchCutError(f"2F1 evaluated on its cut [1, inf) at z={z.real}")
        w = z / (z - 1)
        if min(abs(z), abs(w)) > REACH_2F1:
            raise DomainError(f"2F1 at z={z} is outside the reach of the series")
        if abs(w) < abs(z):
            return -a[0] * cmath.log(1 - z) + _series_log((a[0], b - a[1]), b, w)
        return _series_log(a, b, z)
    raise DomainError(f"unknown kind {kind!r}")


def hyp_series(kind: str, a, b, z) -> complex:
    """pFq(a; b; z) by power series, relative error about 1e-13 or better.

    Raises ``UnsupportedScaleError`` when the value overflows a double; use
    ``log_hyp_series`` then.
    """
    lv = log_hyp_series(kind, a, b, z)
    try:
        return cmath.exp(lv)
    except OverflowError as exc:
        raise UnsupportedScaleError("value overflows double precision") from exc


# --------------------------------------------------------------------------
# Uniform large-m approximations


def saddle_phi0(eta0) -> tuple[complex, complex]:
    """Saddle point t0 of ln t - t - eta0/t + 1 and the value there."""
    eta0 = complex(eta0)
    w = 1.0 + 4.0 * eta0
    if w.imag == 0 and w.real <= 0:
        raise DomainError(f"eta0={eta0} lies on the cut (-inf, -1/4]")
    t0 = 0.5 * (1.0 + cmath.sqrt(w))
    return t0, cmath.log(t0) - t0 - eta0 / t0 + 1.0


def in_omega0(eta0, delta: float = 0.1) -> bool:
    eta0 = complex(eta0)
    return eta0 != 0 and abs(cmath.phase(eta0)) <= math.pi - delta


def log_approx_0F1(m: float, eta0) -> complex:
    """log of (1+4 eta0)^(-1/4) exp(-m phi0(t0))."""
    eta0 = complex(eta0)
    if eta0 != 0 and not in_omega0(eta0, 0.0):
        warnings.warn(f"eta0={eta0} outside the uniform region", DomainWarning, stacklevel=2)
    t0, ph = saddle_phi0(eta0)
    return -0.25 * cmath.log(1.0 + 4.0 * eta0) - m * ph


def approx_0F1(m: float, eta0) -> complex:
    """Uniform approximation to 0F1(; m+1; m^2 eta0)."""
    return cmath.exp(log_approx_0F1(m, eta0))


class Saddle(NamedTuple):
    """Saddle-point data of the integral representation of F1 or F2."""

    t: complex
    phi: complex
    psi: complex
    omega: float
    phi2: complex
    omega0: float


def _phi(j, eps, eta, t):
    if j == 1:
        return -eta * t - eps * cmath.log(t) + (eps - 1.0) * cmath.log(t - 1.0)
    return -eps * cmath.log(t / (1.0 - eta * t)) + (eps - 1.0) * cmath.log(t - 1.0)


def _phi_d1(j, eps, eta, t):
    if j == 1:
        return -eta - eps / t + (eps - 1.0) / (t - 1.0)
    return -eps / t - eps * eta / (1.0 - eta * t) + (eps - 1.0) / (t - 1.0)


def _phi_d2(j, eps, eta, t):
    out = eps / t**2 - (eps - 1.0) / (t - 1.0) ** 2
    if j == 2:
        out -= eps * eta**2 / (1.0 - eta * t) ** 2
    return out


def _check_j(j, eps):
    if j not in (1, 2):
        raise DomainError(f"j must be 1 or 2, got {j}")
    if not eps > 1.0:
        raise DomainError(f"eps must exceed 1, got {eps}")


def saddle_j(j: int, eps: float, eta) -> Saddle:
    """Saddle point t_j with phi_j, psi_j, omega_j and phi_j'' there.

    ``t_j`` is written in rationalised form, equal to the quadratic-root
    formula but finite at eta = 0 (t_j = eps there).
    """
    _check_j(j, eps)
    eta = complex(eta)
    if j == 1:
        t = 2.0 * eps / ((1.0 - eta) + cmath.sqrt((eta - 1.0) ** 2 + 4.0 * eps * eta))
        psi = 1.0 / (t - 1.0)
    else:
        if eta.imag == 0 and eta.real >= 1:
            raise BranchCutError(f"eta2={eta.real} makes 1 - eta2 non-positive")
        t = 2.0 * eps / (1.0 + cmath.sqrt(1.0 + 4.0 * eps * (eps - 1.0) * eta))
        psi = 1.0 / ((t - 1.0) * (1.0 - eta * t))
    phi = _phi(j, eps, eta, t)
    d2 = _phi_d2(j, eps, eta, t)
    omega0 = cmath.phase(t - 1.0)
    base = cmath.phase(d2) + math.pi
    for k in (0, -1, 1, -2, 2):
        omega = base + 2.0 * math.pi * k
        if abs(omega + 2.0 * omega0) <= 0.5 * math.pi + 1e-12:
            break
    else:
        raise BranchError(f"no branch of omega satisfies the steepest-descent condition (eta={eta})")
    return Saddle(t, phi, psi, omega, d2, omega0)


def log_Cm(m: float, eps: float) -> float:
    """log of Gamma(m+1) Gamma(m(eps-1)+1) / Gamma(m eps+1)."""
    return float(gammaln(m + 1.0) + gammaln(m * (eps - 1.0) + 1.0) - gammaln(m * eps + 1.0))


def log_stirling_Cm(m: float, eps: float) -> float:
    """log of the Stirling form of C_m.

    sqrt(2 pi m (eps-1)/eps) exp{m (eps-1) ln(eps-1) - m eps ln eps}; with
    m = (n1-p)/2 and eps = (n-p)/(n1-p) the prefactor equals
    sqrt(pi p (1-c1))/r.
    """
    if eps < 1.0:
        raise DomainError(f"eps must be at least 1, got {eps}")
    x = eps - 1.0
    pref = 0.5 * math.log(2.0 * math.pi * m * x / eps) if x > 0 else -math.inf
    return pref + m * float(xlogy(x, x)) - m * eps * math.log(eps)


def stirling_Cm(m: float, eps: float) -> float:
    return math.exp(log_stirling_Cm(m, eps))


def _dist_to_rays(eta, upper):
    """Distance from eta to R minus [0, upper] (upper may be inf)."""
    x, y = eta.real, eta.imag
    d = abs(y) if x < 0 else abs(eta)
    if math.isfinite(upper):
        d = min(d, abs(y) if x > upper else abs(eta - upper))
    return d


def in_omega(j: int, eps: float, eta, delta: float = 0.1) -> bool:
    """Membership of (eps, eta) in the uniformity region of F_j."""
    eta = complex(eta)
    big = 1.0 / delta if delta > 0 else math.inf
    if not delta <= eps - 1.0 <= big or abs(eta) > big:
        return False
    if j == 1:
        return eta.real >= -2.0 * eps + 1.0 and _dist_to_rays(eta, math.inf) >= delta
    if j == 2:
        return _dist_to_rays(eta, 1.0) >= delta
    raise DomainError(f"j must be 1 or 2, got {j}")


def log_approx_Fj(j: int, m: float, eps: float, eta, *, check_domain: bool = True) -> complex:
    """log of C_m psi e^{-i omega/2} |2 pi m phi''|^{-1/2} exp(-m phi) at t_j."""
    if check_domain and not in_omega(j, eps, eta, 0.0):
        warnings.warn(f"(eps, eta)=({eps}, {eta}) outside the uniform region",
                      DomainWarning, stacklevel=2)
    sd = saddle_j(j, eps, eta)
    return (log_Cm(m, eps) + cmath.log(sd.psi) - 0.5j * sd.omega
            - 0.5 * math.log(abs(2.0 * math.pi * m * sd.phi2)) - m * sd.phi)


def approx_Fj(j: int, m: float, eps: float, eta) -> complex:
    """Uniform approximation to F1 = 1F1(m eps+1; m+1; m eta) (j = 1) or
    F2 = 2F1(m eps+1, m eps+1; m+1; eta) (j = 2)."""
    return cmath.exp(log_approx_Fj(j, m, eps, eta))


# --------------------------------------------------------------------------
# parameter bundle


@dataclass(frozen=True)
class AsymParams:
    """m, eps and l(theta) of a case; ``eta(j, z)`` gives eta_j at z."""

    m: float
    eps: float
    ell: float
    c1: float
    c2: float
    theta: float

    @classmethod
    def from_dims(cls, p: int, n1: int, n2: int | None, theta: float) -> "AsymParams":
        if not p < n1:
            raise DomainError("need p < n1")
        c1 = p / n1
        c2 = p / n2 if n2 else 0.0
        n = n1 + (n2 or 0)
        m = 0.5 * (n1 - p)
        eps = (n - p) / (n1 - p)
        ell = 1.0 + (1.0 + theta) * c2 / c1
        return cls(m, eps, ell, c1, c2, theta)

    def eta(self, j: int, z):
        c1, c2, th = self.c1, self.c2, self.theta
        if j == 0:
            return z * th / (1.0 - c1) ** 2
        if j == 1:
            return z * th * c2 / (c1 * (1.0 - c1))
        if j == 2:
            return z * th * c2**2 / (c1**2 * self.ell)
        raise DomainError(f"j must be 0, 1 or 2, got {j}")
