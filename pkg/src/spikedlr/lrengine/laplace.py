"""Laplace leading term and asymptotic form of the likelihood ratio."""

from __future__ import annotations

import cmath
import math
from dataclasses import asdict, dataclass, field

import numpy as np

from ..ensembles import CaseSpec
from ..errors import DomainError, NumericalError
from ..spectra import f2_closed
from .params import check_theta, d2, delta_p_value, saddle_z0
from .parts import eigenvalues_of, laplace_parts
from .quadrature import lr_quadrature

__all__ = ["LaplaceResult", "lr_laplace", "delta_p", "lr_asymptotic", "log_lr_asymptotic",
           "LRResult", "evaluate"]


@dataclass
class LaplaceResult:
    log_value: float
    sign: float
    flags: dict = field(default_factory=dict)

    @property
    def value(self) -> float:
        return self.sign * math.exp(self.log_value)


def lr_laplace(spec: CaseSpec, theta: float, sample) -> LaplaceResult:
    """g(z0) / sqrt(-2 f''(z0)) = g(z0) sqrt(D2) / theta.

    When lambda_1 >= z0 the factor g_II is set to one (flag ``g_II_unity``).
    """
    lp = laplace_parts(spec, theta, sample)
    lg = complex(lp.log_g(lp.z0))
    val = lg + 0.5 * math.log(d2(spec, theta)) - math.log(theta)
    # g is real at the real saddle point up to rounding
    sign = math.copysign(1.0, math.cos(val.imag))
    return LaplaceResult(val.real, sign, {"g_II_unity": lp.g_II_unity})


def delta_p(spec: CaseSpec, theta: float, sample) -> tuple[float, bool]:
    """(Delta_p(theta), flagged).

    Delta_p = sum_j ln(z0 - lambda_j) - p int ln(z0 - lambda) dF_c, set to
    zero (flagged) when lambda_1 >= z0.
    """
    check_theta(spec, theta)
    lam = eigenvalues_of(sample)
    if lam is None:
        return 0.0, False
    z0 = saddle_z0(spec, theta)
    if lam[0] >= z0:
        return 0.0, True
    total = float(np.sum(np.log(z0 - lam)))
    return total - spec.p * f2_closed(spec.case, spec.c1, spec.c2, theta), False


def log_lr_asymptotic(spec: CaseSpec, theta: float, sample) -> tuple[float, bool]:
    """(-Delta_p/2 + ln(1 - delta_p^2)/2, flagged)."""
    dp = delta_p_value(spec, theta)
    if dp >= 1.0:
        raise DomainError(f"delta_p={dp} >= 1: theta at or above the finite-p threshold")
    dl, flag = delta_p(spec, theta, sample)
    return -0.5 * dl + 0.5 * math.log1p(-dp * dp), flag


def lr_asymptotic(spec: CaseSpec, theta: float, sample) -> float:
    return math.exp(log_lr_asymptotic(spec, theta, sample)[0])


@dataclass
class LRResult:
    """log L by up to three methods plus diagnostics."""

    case: str
    theta: float
    z0: float | None
    delta_p: float | None
    log_laplace: float | None = None
    log_quadrature: float | None = None
    log_asymptotic: float | None = None
    flags: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return asdict(self)


METHODS = ("laplace", "quadrature", "asymptotic")


def evaluate(spec: CaseSpec, theta: float, sample, methods=METHODS) -> LRResult:
    """Run the requested methods; numerical failures of one method are recorded
    in ``flags`` without stopping the others."""
    methods = tuple(METHODS if methods in ("all", None) else methods)
    unknown = set(methods) - set(METHODS)
    if unknown:
        raise DomainError(f"unknown method(s) {sorted(unknown)}")
    z0 = saddle_z0(spec, theta)
    dl, flagged = delta_p(spec, theta, sample)
    res = LRResult(spec.case.value, float(theta), z0, dl, flags={"lambda1_beyond_z0": flagged})
    for m in methods:
        try:
            if m == "laplace":
                r = lr_laplace(spec, theta, sample)
                if r.sign < 0:
                    res.flags["laplace_negative"] = True
                res.log_laplace = r.log_value
            elif m == "quadrature":
                r = lr_quadrature(spec, theta, sample)
                if r.sign < 0:
                    res.flags["quadrature_negative"] = True
                res.log_quadrature = r.log_value
                res.flags.update({f"quadrature_{k}": v for k, v in r.flags.items()})
            else:
                res.log_asymptotic = log_lr_asymptotic(spec, theta, sample)[0]
        except NumericalError as exc:
            res.flags[f"{m}_error"] = f"{exc.code}: {exc}"
    return res
