"""Case parameters of the likelihood ratio and closed forms at the saddle."""

from __future__ import annotations

import math
from dataclasses import dataclass

from scipy.special import gammaln

from ..ensembles import Case, CaseSpec
from ..errors import DomainError
from ..spectra import law_for, support, threshold

__all__ = [
    "LRParams",
    "lr_params",
    "threshold_p",
    "check_theta",
    "saddle_z0",
    "d2",
    "delta_p_value",
    "ratios",
]


@dataclass(frozen=True)
class LRParams:
    """Scalars of L(theta) = alpha(theta) pFq(a, b; Psi, Lambda).

    ``kind`` names the scalar function pFq(a - s, b - s; Psi11 z) that appears
    under the contour integral.  Gamma products are kept as logarithms.
    """

    case: Case
    p: int
    theta: float
    psi11: float
    log_alpha: float
    a: tuple
    b: tuple
    s: float
    log_qs: float

    @property
    def kind(self) -> str:
        return f"{len(self.a)}F{len(self.b)}"

    @property
    def pbar(self) -> int:
        return len(self.a)

    @property
    def qbar(self) -> int:
        return len(self.b)

    @property
    def alpha_theta(self) -> float:
        return math.exp(self.log_alpha)

    @property
    def q_s(self) -> float:
        return math.exp(self.log_qs)

    @property
    def log_prefactor(self) -> float:
        """log of Gamma(s+1) alpha(theta) q_s / Psi11^s (theta > 0)."""
        return (float(gammaln(self.s + 1.0)) + self.log_alpha + self.log_qs
                - self.s * math.log(self.psi11))


def lr_params(spec: CaseSpec, theta: float) -> LRParams:
    if theta < 0:
        raise DomainError(f"theta must be nonnegative, got {theta}")
    case, p, n1, n2 = spec.case, spec.p, spec.n1, spec.n2
    n = spec.n
    th = float(theta)
    if case is Case.SMD:
        psi, la, a, b = th * p / 2.0, -p * th**2 / 4.0, (), ()
    elif case is Case.PCA:
        psi, la, a, b = th * n1 / (2.0 * (1.0 + th)), -0.5 * n1 * math.log1p(th), (), ()
    elif case is Case.SigD:
        psi, la, a, b = th * n1 / (n2 * (1.0 + th)), -0.5 * n1 * math.log1p(th), (n / 2.0,), ()
    elif case is Case.REG0:
        psi, la, a, b = th * n1**2 / 4.0, -0.5 * n1 * th, (), (n1 / 2.0,)
    elif case is Case.REG:
        psi, la, a, b = th * n1**2 / (2.0 * n2), -0.5 * n1 * th, (n / 2.0,), (n1 / 2.0,)
    else:
        psi = th * n1**2 / (n2**2 + n2 * n1 * (1.0 + th))
        la = -0.5 * n * math.log1p(n1 * th / n)
        a, b = (n / 2.0, n / 2.0), (n1 / 2.0,)
    s = p / 2.0 - 1.0
    lq = sum(gammaln(x - s) - gammaln(x) for x in a) + sum(gammaln(x) - gammaln(x - s) for x in b)
    return LRParams(case, p, th, psi, la, a, b, s, float(lq))


def ratios(spec: CaseSpec) -> tuple[float, float, float, float]:
    """(c1, c2, r^2, r) with the finite-p ratios."""
    c1, c2 = spec.c1, spec.c2
    r2 = c1 + c2 - c1 * c2
    return c1, c2, r2, math.sqrt(r2)


def threshold_p(spec: CaseSpec) -> float:
    """Threshold of the law with the finite-p ratios."""
    return threshold(law_for(spec))


def check_theta(spec: CaseSpec, theta: float) -> None:
    thr = threshold_p(spec)
    if not 0.0 < theta < thr:
        raise DomainError(f"theta={theta} outside (0, {thr}) for {spec.case.value}")


def _ell(c1, c2, theta):
    return 1.0 + (1.0 + theta) * c2 / c1


def saddle_z0(spec: CaseSpec, theta: float, *, check: bool = True) -> float:
    """Real saddle point of f to the right of the support."""
    if check:
        check_theta(spec, theta)
    c1, c2, _, _ = ratios(spec)
    fam = spec.case.family
    if fam == "SC":
        z0 = theta + 1.0 / theta
    elif fam == "MP":
        z0 = (1.0 + theta) * (theta + c1) / theta
    else:
        z0 = (1.0 + theta) * (theta + c1) / (theta * _ell(c1, c2, theta))
    if check and not z0 > support(law_for(spec))[1]:
        raise DomainError(f"saddle point {z0} not above the support edge")
    return z0


def d2(spec: CaseSpec, theta: float) -> float:
    """D2 with -2 f''(z0) = theta^2 / D2."""
    check_theta(spec, theta)
    c1, c2, r2, _ = ratios(spec)
    th = theta
    case = spec.case
    if case is Case.SMD:
        return 1.0 - th**2
    if case is Case.PCA:
        return c1 * (c1 - th**2) * (1.0 + th) ** 2
    if case is Case.REG0:
        return c1 * (1.0 + c1 + 2.0 * th) * (c1 - th**2)
    ell = _ell(c1, c2, th)
    h = c1 + c2 * (1.0 + th) ** 2 - th**2
    if case is Case.SigD:
        return r2 * h * (1.0 + th) ** 2 / ell**4
    if case is Case.REG:
        return c1 * h * (c1 + th + (1.0 + th) * ell) / ell**4
    return c1**2 * h * (2.0 * (c1 + th) + ell * (1.0 - c1)) / (ell**3 * (c1 + c2))


def delta_p_value(spec: CaseSpec, theta: float) -> float:
    """delta_p(theta) with the finite-p ratios; reaches 1 at the threshold."""
    c1, c2, _, r = ratios(spec)
    fam = spec.case.family
    if fam == "SC":
        return theta
    if fam == "MP" or c2 == 0.0:
        return theta / math.sqrt(c1)
    return theta * r / (c1 * _ell(c1, c2, theta))
