"""Steep-descent contours through the saddle point.

Only the upper half K+ = K1 u K2 is built; the lower half is its mirror
image.  Each piece is parameterised by arc length ``u`` (in the tau-plane for
REG) starting where it meets the previous one, so K1 starts on the real axis.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from ..ensembles import Case, CaseSpec
from ..errors import DomainError
from .params import lr_params, ratios, saddle_z0

__all__ = ["Segment", "ContourSpec", "contour", "reg_map", "reg_map_deriv", "reg_preimage"]

# least distance between the contour and the SigD/CCA branch point
CLEARANCE = 1e-6


@dataclass(frozen=True)
class Segment:
    """z(u) and dz/du for 0 <= u <= length (length may be inf)."""

    name: str
    length: float
    z: Callable[[np.ndarray], np.ndarray]
    dz: Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class ContourSpec:
    case: Case
    z0: float
    anchor: float
    segments: tuple
    tau0: float | None = None

    def points(self, n: int = 200, which: int = 0) -> np.ndarray:
        """``n`` points along a finite segment (K1 by default), from the real axis."""
        seg = self.segments[which]
        if not math.isfinite(seg.length):
            raise DomainError("segment is unbounded")
        u = np.linspace(0.0, seg.length, n)
        return seg.z(u)


def _vertical(a):
    return Segment("K1", 2.0 * a, lambda u: a + 1j * np.asarray(u), lambda u: 1j * np.ones_like(u, dtype=complex))


def _horizontal(start):
    return Segment("K2", math.inf, lambda u: start - np.asarray(u), lambda u: -np.ones_like(u, dtype=complex))


def _arc(center, radius, name="K1", zmap=None, dmap=None):
    def tz(u):
        return center + radius * np.exp(1j * np.asarray(u) / radius)

    def dtz(u):
        return 1j * np.exp(1j * np.asarray(u) / radius)

    if zmap is None:
        return Segment(name, 0.5 * math.pi * radius, tz, dtz)
    return Segment(name, 0.5 * math.pi * radius, lambda u: zmap(tz(u)), lambda u: dmap(tz(u)) * dtz(u))


def _ray(start, name="K2", zmap=None, dmap=None):
    def tz(u):
        return start - np.asarray(u)

    def dtz(u):
        return -np.ones_like(u, dtype=complex)

    if zmap is None:
        return Segment(name, math.inf, tz, dtz)
    return Segment(name, math.inf, lambda u: zmap(tz(u)), lambda u: dmap(tz(u)) * dtz(u))


def _reg_consts(spec, theta):
    c1, c2, _, _ = ratios(spec)
    eps = (spec.n - spec.p) / (spec.n1 - spec.p)
    scale = c1 * (1.0 - c1) / (theta * c2)
    return scale, eps


def reg_map(spec: CaseSpec, theta: float, tau):
    """z(tau) = K tau (tau + 1) / (tau + eps) for REG."""
    k, eps = _reg_consts(spec, theta)
    tau = np.asarray(tau, dtype=complex)
    return k * tau * (tau + 1.0) / (tau + eps)


def reg_map_deriv(spec: CaseSpec, theta: float, tau):
    k, eps = _reg_consts(spec, theta)
    tau = np.asarray(tau, dtype=complex)
    return k * (tau**2 + 2.0 * eps * tau + eps) / (tau + eps) ** 2


def reg_preimage(spec: CaseSpec, theta: float, z: float) -> float:
    """Positive real tau with z(tau) = z > 0."""
    k, eps = _reg_consts(spec, theta)
    b = k - z
    return (-b + math.sqrt(b * b + 4.0 * k * z * eps)) / (2.0 * k)


def contour(spec: CaseSpec, theta: float, anchor: float | None = None, *,
            check: bool = True) -> ContourSpec:
    """Contour K+ of the case.

    ``anchor`` moves the real crossing point away from z0 (used when the
    largest eigenvalue lies beyond z0); the shape is otherwise unchanged.
    ``check=False`` skips the sub-critical requirement on theta.
    """
    if theta <= 0:
        raise DomainError("theta must be positive")
    z0 = saddle_z0(spec, theta, check=check)
    a = z0 if anchor is None else float(anchor)
    if a <= 0:
        raise DomainError("contour must cross the positive real axis")
    case = spec.case
    c1, c2, r2, _ = ratios(spec)
    if case in (Case.SigD, Case.CCA):
        cut = 1.0 / lr_params(spec, theta).psi11
        if cut - a < CLEARANCE:
            raise DomainError(f"contour crossing {a} within {CLEARANCE} of the branch point {cut}")
    tau0 = None
    if case in (Case.SMD, Case.PCA, Case.SigD):
        segs = (_vertical(a), _horizontal(a + 2j * a))
    elif case in (Case.REG0, Case.CCA):
        if case is Case.REG0:
            z1 = -((1.0 - c1) ** 2) / (4.0 * theta)
        else:
            ell = 1.0 + (1.0 + theta) * c2 / c1
            z1 = -c1 * (1.0 - c1) ** 2 * ell / (4.0 * theta * r2)
        rad = abs(a - z1)
        segs = (_arc(z1, rad), _ray(z1 + 1j * rad))
    else:
        _, eps = _reg_consts(spec, theta)
        tau0 = (theta + c1) / (1.0 - c1)
        ta = tau0 if anchor is None else reg_preimage(spec, theta, a)
        rad = ta + eps

        def zm(t):
            return reg_map(spec, theta, t)

        def dm(t):
            return reg_map_deriv(spec, theta, t)

        segs = (_arc(-eps, rad, zmap=zm, dmap=dm), _ray(-eps + 1j * rad, zmap=zm, dmap=dm))
    return ContourSpec(case, z0, a, segs, tau0)
