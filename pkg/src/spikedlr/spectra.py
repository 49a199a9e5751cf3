"""Limiting spectral laws of the null eigenvalues.

Three families:

* ``SC``  semicircle on [-2, 2];
* ``MP``  Marchenko-Pastur with ratio c1;
* ``W``   scaled Wachter with ratios (c1, c2).

Integrals against a law use the substitution ``lam = a - b cos(phi)`` with
``a, b`` the midpoint and half-width of the support.  It absorbs the
square-root edge behaviour of every density into ``b sin(phi)``, leaving a
smooth integrand on [0, pi].
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy import integrate

from .ensembles import Case, CaseSpec
from .errors import DomainError, ToleranceError

__all__ = [
    "LimitLaw",
    "law_for",
    "support",
    "density",
    "cdf",
    "threshold",
    "stieltjes",
    "stieltjes_deriv",
    "lss_expectation",
    "log_potential",
    "f2_closed",
]


@dataclass(frozen=True)
class LimitLaw:
    """A member of one of the three families.

    ``c2 = 0`` inside the ``W`` family is the Marchenko-Pastur law.
    """

    family: str
    c1: float = 0.0
    c2: float = 0.0

    def __post_init__(self):
        fam = self.family.upper()
        if fam not in ("SC", "MP", "W"):
            raise DomainError(f"unknown family {self.family!r}")
        object.__setattr__(self, "family", fam)
        if fam == "SC":
            object.__setattr__(self, "c1", 0.0)
            object.__setattr__(self, "c2", 0.0)
            return
        if not 0.0 < self.c1 < 1.0:
            raise DomainError(f"c1 must lie in (0, 1), got {self.c1}")
        if fam == "MP":
            object.__setattr__(self, "c2", 0.0)
        elif not 0.0 <= self.c2 <= 1.0:
            raise DomainError(f"c2 must lie in [0, 1], got {self.c2}")

    @property
    def kind(self) -> str:
        """Family after resolving the c2 = 0 alias."""
        if self.family == "W" and self.c2 == 0.0:
            return "MP"
        return self.family

    @property
    def r2(self) -> float:
        return self.c1 + self.c2 - self.c1 * self.c2

    @property
    def r(self) -> float:
        return math.sqrt(self.r2)

    @property
    def support(self) -> tuple[float, float]:
        return support(self)


def law_for(spec: CaseSpec) -> LimitLaw:
    """Law with the finite-p ratios c1 = p/n1, c2 = p/n2 of ``spec``."""
    return LimitLaw(spec.case.family, spec.c1, spec.c2)


# --------------------------------------------------------------------------
# closed forms


@lru_cache(maxsize=1024)
def _support(kind: str, c1: float, c2: float) -> tuple[float, float]:
    if kind == "SC":
        return (-2.0, 2.0)
    if kind == "MP":
        s = math.sqrt(c1)
        return ((1.0 - s) ** 2, (1.0 + s) ** 2)
    r = math.sqrt(c1 + c2 - c1 * c2)
    hi = c1 * ((r + 1.0) / (r + c2)) ** 2
    if c2 == 1.0:
        # (r - 1)/(r - c2) -> -(1 - c1)/(1 + c1) as c2 -> 1
        lo = c1 * ((1.0 - c1) / (1.0 + c1)) ** 2
    else:
        lo = c1 * ((r - 1.0) / (r - c2)) ** 2
    return (lo, hi)


def support(law: LimitLaw) -> tuple[float, float]:
    return _support(law.kind, law.c1, law.c2)


def _weight(law: LimitLaw, lam):
    """density / sqrt((b+ - lam)(lam - b-))."""
    kind = law.kind
    if kind == "SC":
        return np.full_like(np.asarray(lam, dtype=float), 1.0 / (2.0 * np.pi))
    if kind == "MP":
        return 1.0 / (2.0 * np.pi * law.c1 * lam)
    c1, c2 = law.c1, law.c2
    return (c1 + c2) / (2.0 * np.pi * c1 * lam * (c1 - c2 * lam))


def density(law: LimitLaw, lam):
    """Density of ``law``; zero outside the support."""
    lam = np.asarray(lam, dtype=float)
    lo, hi = support(law)
    inside = (lam > lo) & (lam < hi)
    out = np.zeros_like(lam)
    x = lam[inside]
    out[inside] = _weight(law, x) * np.sqrt((hi - x) * (x - lo))
    return out if out.ndim else float(out)


def threshold(law: LimitLaw) -> float:
    """Phase transition threshold of the spike."""
    kind = law.kind
    if kind == "SC":
        return 1.0
    if kind == "MP":
        return math.sqrt(law.c1)
    if law.c2 >= 1.0:
        warnings.warn("threshold is infinite for c2 = 1", RuntimeWarning, stacklevel=2)
        return math.inf
    return (law.c2 + law.r) / (1.0 - law.c2)


def _sqrt_pair(z, lo, hi):
    # sqrt(z - lo) sqrt(z - hi): cut exactly on [lo, hi], ~ z at infinity
    return np.sqrt(z - lo + 0j) * np.sqrt(z - hi + 0j)


def _stieltjes_parts(law: LimitLaw, z):
    """m(z) = -2 k / (A(z) + S(z)); returns (k, A, A', S, S')."""
    lo, hi = support(law)
    root = _sqrt_pair(z, lo, hi)
    dlog = (2.0 * z - lo - hi) / 2.0
    kind = law.kind
    if kind == "SC":
        return 1.0, z, 1.0, root, dlog / root
    if kind == "MP":
        return 1.0, z + law.c1 - 1.0, 1.0, root, dlog / root
    c1, c2 = law.c1, law.c2
    A = (c1 - 1.0) * (c1 - c2 * z) + (1.0 - c2) * c1 * z
    dA = c1 + c2 - 2.0 * c1 * c2
    s = c1 + c2
    return law.r2, A, dA, s * root, s * dlog / root


def _check_off_support(law, z):
    z = np.asarray(z)
    lo, hi = support(law)
    bad = (np.abs(np.imag(z)) == 0) & (np.real(z) >= lo) & (np.real(z) <= hi)
    if np.any(bad):
        raise DomainError("Stieltjes transform evaluated on the support")


def stieltjes(law: LimitLaw, z):
    """m(z) = int (lam - z)^{-1} dF(lam) for z off the support."""
    z = np.asarray(z, dtype=complex)
    _check_off_support(law, z)
    k, A, _, S, _ = _stieltjes_parts(law, z)
    m = -2.0 * k / (A + S)
    return m if m.ndim else complex(m)


def stieltjes_deriv(law: LimitLaw, z):
    """dm/dz, analytic."""
    z = np.asarray(z, dtype=complex)
    _check_off_support(law, z)
    k, A, dA, S, dS = _stieltjes_parts(law, z)
    d = 2.0 * k * (dA + dS) / (A + S) ** 2
    return d if d.ndim else complex(d)


# --------------------------------------------------------------------------
# integrals against the law


def _angle_map(law):
    lo, hi = support(law)
    return 0.5 * (lo + hi), 0.5 * (hi - lo)


def lss_expectation(law: LimitLaw, g, *, epsabs=1e-13, epsrel=1e-12, limit=200) -> float:
    """int g dF by adaptive quadrature in the angle variable.

    ``g`` may return complex values; real and imaginary parts are integrated
    separately.
    """
    a, b = _angle_map(law)

    def kernel(phi):
        lam = a - b * math.cos(phi)
        return g(lam) * _weight(law, lam) * (b * math.sin(phi)) ** 2

    val0 = complex(kernel(0.5 * math.pi))
    parts = [lambda t: complex(kernel(t)).real]
    if val0.imag != 0.0:
        parts.append(lambda t: complex(kernel(t)).imag)
    out = []
    for fn in parts:
        with warnings.catch_warnings():
            warnings.simplefilter("error", integrate.IntegrationWarning)
            try:
                val, err = integrate.quad(fn, 0.0, math.pi, epsabs=epsabs,
                                          epsrel=epsrel, limit=limit)
            except integrate.IntegrationWarning as exc:
                raise ToleranceError(f"quadrature did not converge: {exc}") from exc
        if err > max(epsabs, epsrel * abs(val)) * 10:
            raise ToleranceError(f"quadrature error estimate {err:.2e} too large")
        out.append(val)
    return out[0] if len(out) == 1 else complex(out[0], out[1])


@lru_cache(maxsize=8)
def _gl_nodes(n):
    x, w = np.polynomial.legendre.leggauss(n)
    return x, w


def _angle_rule(law, n):
    a, b = _angle_map(law)
    x, w = _gl_nodes(n)
    phi = 0.5 * math.pi * (x + 1.0)
    lam = a - b * np.cos(phi)
    wt = 0.5 * math.pi * w * _weight(law, lam) * (b * np.sin(phi)) ** 2
    return lam, wt


def log_potential(law: LimitLaw, z, *, tol=1e-14):
    """int ln(z - lam) dF(lam) (principal log) for z off the support.

    Vectorised fixed Gauss-Legendre rule in the angle variable; the node count
    doubles until two consecutive rules agree to ``tol``.
    """
    z = np.asarray(z, dtype=complex)
    _check_off_support(law, z)
    zf = z.reshape(-1)
    prev = None
    n = 64
    while n <= 8192:
        lam, wt = _angle_rule(law, n)
        cur = np.log(zf[:, None] - lam[None, :]) @ wt
        if prev is not None and np.max(np.abs(cur - prev)) <= tol * max(1.0, np.max(np.abs(cur))):
            break
        prev = cur
        n *= 2
    else:
        raise ToleranceError("log potential rule did not converge (z too close to the support)")
    out = cur.reshape(z.shape)
    if not out.ndim:
        out = complex(out)
        return out.real if z.imag == 0 else out
    return out.real if np.all(z.imag == 0) else out


def cdf(law: LimitLaw, x):
    """Distribution function, evaluated with a 64-point rule per abscissa."""
    x = np.asarray(x, dtype=float)
    lo, hi = support(law)
    a, b = _angle_map(law)
    xf = np.clip(x.reshape(-1), lo, hi)
    top = np.arccos(np.clip((a - xf) / b, -1.0, 1.0))
    gx, gw = _gl_nodes(64)
    phi = 0.5 * top[:, None] * (gx[None, :] + 1.0)
    lam = a - b * np.cos(phi)
    vals = _weight(law, lam) * (b * np.sin(phi)) ** 2
    out = 0.5 * top * (vals @ gw)
    out = np.where(xf >= hi, 1.0, np.where(xf <= lo, 0.0, np.clip(out, 0.0, 1.0)))
    out = out.reshape(x.shape)
    return out if out.ndim else float(out)


# --------------------------------------------------------------------------
# closed forms of 2 f_II(z0) = int ln(z0 - lam) dF


def f2_closed(case, c1: float, c2: float, theta: float) -> float:
    """Closed form of int ln(z0(theta) - lam) dF_c(lam).

    ``z0(theta)`` is the saddle point of the case; the identity holds for
    ``0 < theta`` below the finite-p threshold.
    """
    case = Case.parse(case)
    fam = case.family
    if fam == "SC":
        thr = 1.0
    elif fam == "MP" or c2 == 0.0:
        thr = math.sqrt(c1)
    else:
        thr = threshold(LimitLaw("W", c1, c2))
    if not 0.0 < theta < thr:
        raise DomainError(f"theta={theta} outside (0, {thr})")
    if fam == "SC":
        return -math.log(theta) + 0.5 * theta**2
    if fam == "MP" or c2 == 0.0:
        return math.log(c1) - math.log(theta) - (1.0 - c1) / c1 * math.log1p(theta) + theta / c1
    r2 = c1 + c2 - c1 * c2
    ell = 1.0 + (1.0 + theta) * c2 / c1
    return (2.0 * math.log(c1) - math.log(theta) - (1.0 - c1) / c1 * math.log1p(theta)
            - (c1 + c2) / (c1 * c2) * math.log(c1 + c2)
            + r2 / (c1 * c2) * math.log(c1 * ell))
