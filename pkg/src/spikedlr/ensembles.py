"""Samplers for the six spiked models and their eigenvalue statistics.

Each case reduces to the eigenvalues of a pair (H, E):

    SMD   X = Z/sqrt(p) + theta psi psi',      E = I
    PCA   H = B'B/n1, rows of B ~ N(0, I + theta psi psi'),   E = I
    SigD  H as in PCA, E = W_p(n2, I)/n2, beta-form eigenvalues
    REG0  H = B'B/n1, E[B] = sqrt(n1 theta) phi psi',         E = I
    REG   H as in REG0, E = W_p(n2, I)/n2, beta-form eigenvalues
    CCA   squared sample canonical correlations between x (dim p) and
          y (dim n1) from n1 + n2 observations, scaled by n2/n1

All samplers are pure functions of (spec, spike, seed).
"""

from __future__ import annotations

import csv
import enum
import io
import json
from dataclasses import dataclass, field

import numpy as np
from scipy import linalg

from .errors import InvalidDimensionError, InvalidSpikeError, NumericalRankError

__all__ = [
    "Case",
    "CaseSpec",
    "SpikeParam",
    "EigenSample",
    "make_rng",
    "replicate_seed",
    "sample_goe",
    "sample_case",
    "generalized_eigs",
    "beta_form_eigs",
    "canonical_correlations_sq",
]


class Case(str, enum.Enum):
    SMD = "SMD"
    PCA = "PCA"
    SigD = "SigD"
    REG0 = "REG0"
    REG = "REG"
    CCA = "CCA"

    @classmethod
    def parse(cls, value: "str | Case") -> "Case":
        if isinstance(value, Case):
            return value
        key = str(value).strip().lower()
        for case in cls:
            if case.value.lower() == key:
                return case
        raise InvalidDimensionError(f"unknown case {value!r}")

    @property
    def family(self) -> str:
        """Limit-law family of the null eigenvalue distribution."""
        if self is Case.SMD:
            return "SC"
        if self in (Case.PCA, Case.REG0):
            return "MP"
        return "W"

    @property
    def two_sample(self) -> bool:
        return self.family == "W"


@dataclass(frozen=True)
class CaseSpec:
    """Model and dimensions.

    ``n1`` is ignored for SMD and ``n2`` is only used by the two-sample cases
    (SigD, REG, CCA); pass ``n2=None`` for the others.
    """

    case: Case
    p: int
    n1: int | None = None
    n2: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "case", Case.parse(self.case))
        p, n1, n2 = self.p, self.n1, self.n2
        if not isinstance(p, (int, np.integer)) or p < 1:
            raise InvalidDimensionError(f"p must be a positive integer, got {p!r}")
        if self.case is Case.SMD:
            return
        if n1 is None or n1 < 1:
            raise InvalidDimensionError(f"{self.case.value} needs n1 >= 1")
        if p >= n1:
            # c1 must lie in (0, 1)
            raise InvalidDimensionError(f"need p < n1, got p={p}, n1={n1}")
        if self.case.two_sample:
            if n2 is None or n2 < 1:
                raise InvalidDimensionError(f"{self.case.value} needs n2 >= 1")
            if p > n2:
                raise InvalidDimensionError(f"need p <= n2, got p={p}, n2={n2}")

    @property
    def c1(self) -> float:
        return 0.0 if self.case is Case.SMD else self.p / self.n1

    @property
    def c2(self) -> float:
        return self.p / self.n2 if self.case.two_sample else 0.0

    @property
    def n(self) -> int:
        return (self.n1 or 0) + (self.n2 or 0)

    @property
    def r2(self) -> float:
        c1, c2 = self.c1, self.c2
        return c1 + c2 - c1 * c2

    def to_dict(self) -> dict:
        return {"case": self.case.value, "p": int(self.p), "n1": self.n1, "n2": self.n2}


@dataclass(frozen=True)
class SpikeParam:
    theta: float = 0.0
    direction: np.ndarray | None = None

    def __post_init__(self):
        if not np.isfinite(self.theta) or self.theta < 0:
            raise InvalidSpikeError(f"theta must be finite and >= 0, got {self.theta!r}")
        if self.direction is not None:
            v = np.asarray(self.direction, dtype=float)
            if v.ndim != 1 or abs(np.linalg.norm(v) - 1.0) > 1e-10:
                raise InvalidSpikeError("spike direction must be a unit vector")
            object.__setattr__(self, "direction", v)

    def unit(self, p: int) -> np.ndarray:
        if self.direction is None:
            e = np.zeros(p)
            e[0] = 1.0
            return e
        if self.direction.shape[0] != p:
            raise InvalidSpikeError(
                f"direction has length {self.direction.shape[0]}, expected {p}"
            )
        return self.direction


@dataclass
class EigenSample:
    spec: CaseSpec
    theta_true: float
    values: np.ndarray
    seed: int
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)

    @property
    def p(self) -> int:
        return self.values.shape[0]

    def to_dict(self) -> dict:
        d = self.spec.to_dict()
        d.update(theta=float(self.theta_true), seed=int(self.seed),
                 values=[float(v) for v in self.values])
        if self.meta:
            d["meta"] = self.meta
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=1, default=_json_float)

    @classmethod
    def from_dict(cls, d: dict) -> "EigenSample":
        spec = CaseSpec(d["case"], int(d["p"]), d.get("n1"), d.get("n2"))
        values = np.asarray(d["values"], dtype=float)
        if values.shape != (spec.p,):
            raise InvalidDimensionError(
                f"expected {spec.p} eigenvalues, got {values.shape[0]}"
            )
        return cls(spec, float(d.get("theta", 0.0)), values, int(d.get("seed", 0)),
                   dict(d.get("meta", {})))

    @classmethod
    def from_json(cls, text: str) -> "EigenSample":
        return cls.from_dict(json.loads(text))

    def to_csv(self) -> str:
        buf = io.StringIO()
        header = json.dumps({k: v for k, v in self.to_dict().items() if k != "values"})
        buf.write(f"# {header}\n")
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["lambda"])
        for v in self.values:
            w.writerow([format(float(v), ".17g")])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> "EigenSample":
        lines = text.splitlines()
        if not lines or not lines[0].startswith("#"):
            raise InvalidDimensionError("eigenvalue CSV must start with a '# {json}' line")
        d = json.loads(lines[0][1:].strip())
        rows = [ln.strip() for ln in lines[1:] if ln.strip()]
        if rows and rows[0] == "lambda":
            rows = rows[1:]
        d["values"] = [float(x) for x in rows]
        return cls.from_dict(d)


def _json_float(x):
    if isinstance(x, (np.floating, np.integer)):
        return x.item()
    raise TypeError(type(x))


# --------------------------------------------------------------------------
# random streams


def replicate_seed(master: int, index: int) -> int:
    """64-bit seed of replicate ``index`` under ``master``."""
    ss = np.random.SeedSequence([int(master) & (2**64 - 1), int(index)])
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def make_rng(seed: int) -> np.random.Generator:
    # Philox is counter-based, so streams keyed by seed are independent.
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(int(seed))))


# --------------------------------------------------------------------------
# linear algebra


def generalized_eigs(H, E) -> np.ndarray:
    """Solutions of det(H - lambda E) = 0 in descending order.

    Uses the Cholesky reduction E = L L' and a symmetric eigensolve of
    L^{-1} H L^{-T}.
    """
    H = np.asarray(H, dtype=float)
    E = np.asarray(E, dtype=float)
    if H.ndim != 2 or H.shape[0] != H.shape[1] or H.shape != E.shape:
        raise InvalidDimensionError(f"H and E must be square and equal in shape, got {H.shape}, {E.shape}")
    try:
        L = linalg.cholesky(E, lower=True)
    except linalg.LinAlgError as exc:
        raise NumericalRankError("E is not positive definite") from exc
    X = linalg.solve_triangular(L, H, lower=True)
    X = linalg.solve_triangular(L, X.T, lower=True)
    X = 0.5 * (X + X.T)
    return linalg.eigvalsh(X)[::-1]


def beta_form_eigs(H, E, n1: int, n2: int) -> np.ndarray:
    """Solutions of det(H - lambda (E + (n1/n2) H)) = 0, descending.

    Obtained from mu solving det(H - mu E) = 0 through the increasing map
    lambda = mu / (1 + (n1/n2) mu).
    """
    mu = generalized_eigs(H, E)
    k = n1 / n2
    return mu / (1.0 + k * mu)


# --------------------------------------------------------------------------
# samplers


def sample_goe(p: int, seed: "int | np.random.Generator") -> np.ndarray:
    """GOE matrix: diagonal N(0, 2), off-diagonal N(0, 1)."""
    if not isinstance(p, (int, np.integer)) or p < 1:
        raise InvalidDimensionError(f"p must be a positive integer, got {p!r}")
    rng = seed if isinstance(seed, np.random.Generator) else make_rng(seed)
    A = rng.standard_normal((p, p))
    return (A + A.T) / np.sqrt(2.0)


def _wishart_factor(rng, n, p, mean=None, cov_spike=None):
    """n x p Gaussian matrix B with optional rank-one mean or covariance spike."""
    B = rng.standard_normal((n, p))
    if cov_spike is not None:
        theta, psi = cov_spike
        if theta > 0:
            # rows ~ N(0, I + theta psi psi')
            B += (np.sqrt(1.0 + theta) - 1.0) * np.outer(B @ psi, psi)
    if mean is not None:
        B += mean
    return B


def sample_case(spec: CaseSpec, spike: SpikeParam | float, seed: int,
                phi: np.ndarray | None = None) -> EigenSample:
    """Draw one eigenvalue sample of ``spec`` with spike ``spike``.

    ``phi`` is the second nuisance direction used by REG0, REG (length n1)
    and CCA (length n1); it defaults to the first coordinate vector.
    """
    if not isinstance(spike, SpikeParam):
        spike = SpikeParam(float(spike))
    rng = make_rng(seed)
    p, theta = spec.p, spike.theta
    psi = spike.unit(p)
    case = spec.case

    if case is Case.SMD:
        X = sample_goe(p, rng) / np.sqrt(p)
        if theta > 0:
            X += theta * np.outer(psi, psi)
        values = linalg.eigvalsh(X)[::-1]
        return EigenSample(spec, theta, values, seed)

    n1, n2 = spec.n1, spec.n2
    if phi is None:
        phi = np.zeros(n1)
        phi[0] = 1.0
    else:
        phi = np.asarray(phi, dtype=float)
        if phi.shape != (n1,) or abs(np.linalg.norm(phi) - 1) > 1e-10:
            raise InvalidSpikeError(f"phi must be a unit vector of length {n1}")

    if case in (Case.PCA, Case.SigD):
        B = _wishart_factor(rng, n1, p, cov_spike=(theta, psi))
        H = B.T @ B / n1
    elif case in (Case.REG0, Case.REG):
        M = np.sqrt(n1 * theta) * np.outer(phi, psi) if theta > 0 else None
        B = _wishart_factor(rng, n1, p, mean=M)
        H = B.T @ B / n1
    else:
        return _sample_cca(spec, theta, psi, phi, rng, seed)

    if case in (Case.PCA, Case.REG0):
        values = linalg.eigvalsh(0.5 * (H + H.T))[::-1]
    else:
        C = rng.standard_normal((n2, p))
        E = C.T @ C / n2
        values = beta_form_eigs(H, E, n1, n2)
    return EigenSample(spec, theta, values, seed)


def _sample_cca(spec, theta, psi, phi, rng, seed):
    """CCA eigenvalues through their conditional Wishart form.

    With x = kappa psi (phi'y) + noise, project the T = n1 + n2 observations
    on the column space of Y and its complement.  Given Y the projected x
    block is an n1-row Gaussian matrix whose mean has rank one and norm
    kappa |Y phi|, with |Y phi|^2 ~ chi^2_T, and the complement is an
    independent n2-row central block.  The squared canonical correlations
    are the beta-form roots of that pair, so only p-column matrices are
    drawn.  The law does not depend on phi.
    """
    p, n1, n2 = spec.p, spec.n1, spec.n2
    T = n1 + n2
    kappa = np.sqrt(n1 * theta / (n1 * theta + n1 + n2))
    shrink = np.sqrt(1.0 - kappa**2) - 1.0
    N1 = rng.standard_normal((n1, p))
    N2 = rng.standard_normal((n2, p))
    norm_y = np.sqrt(rng.chisquare(T))
    if kappa > 0:
        # rows ~ N(0, I - kappa^2 psi psi')
        N1 += shrink * np.outer(N1 @ psi, psi)
        N2 += shrink * np.outer(N2 @ psi, psi)
        N1[0] += kappa * norm_y * psi
    r2 = beta_form_eigs(N1.T @ N1, N2.T @ N2, 1, 1)
    values = np.clip(r2, 0.0, 1.0) * (n2 / n1)
    return EigenSample(spec, theta, values, seed)


def canonical_correlations_sq(X, Y) -> np.ndarray:
    """Squared sample canonical correlations of zero-mean data (rows = observations).

    Computed as squared singular values of the whitened cross-covariance
    S_xx^{-1/2} S_xy S_yy^{-1/2}, via orthonormal bases of the column spaces.
    """
    Qx, _ = np.linalg.qr(X)
    Qy, _ = np.linalg.qr(Y)
    s = linalg.svdvals(Qx.T @ Qy)
    k = X.shape[1]
    out = np.zeros(k)
    out[: s.shape[0]] = np.clip(s, 0.0, 1.0) ** 2
    return np.sort(out)[::-1]
