"""Gaussian limit of the log likelihood-ratio process, power envelopes and the
Monte Carlo harness that checks them."""

from __future__ import annotations

import csv
import io
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np
from scipy import stats

from .ensembles import Case, CaseSpec, replicate_seed, sample_case
from .errors import DomainError, ValidationError
from .lrengine.laplace import log_lr_asymptotic, lr_laplace
from .lrengine.quadrature import lr_quadrature
from .spectra import LimitLaw, threshold

__all__ = [
    "delta_limit",
    "GaussianLimit",
    "limit_law",
    "limit_cov",
    "power_envelope",
    "np_test",
    "MCSummary",
    "monte_carlo",
    "predicted_mean",
]


def _family_threshold(case, g1, g2):
    fam = Case.parse(case).family
    if fam == "SC":
        return 1.0
    if fam == "MP" or g2 == 0.0:
        return math.sqrt(g1)
    import warnings
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        return threshold(LimitLaw("W", g1, g2))


def _delta(case, theta, g1, g2):
    fam = Case.parse(case).family
    if fam == "SC":
        return theta
    if fam == "MP" or g2 == 0.0:
        return theta / math.sqrt(g1)
    rho = math.sqrt(g1 + g2 - g1 * g2)
    return theta * rho / (g1 + g2 + theta * g2)


def delta_limit(case, theta: float, gamma1: float = 0.0, gamma2: float = 0.0) -> float:
    """delta(theta), increasing from 0 at theta = 0 to 1 at the threshold."""
    if theta < 0:
        raise DomainError("theta must be nonnegative")
    thr = _family_threshold(case, gamma1, gamma2)
    if theta >= thr:
        raise DomainError(f"theta={theta} at or above the threshold {thr}")
    return _delta(case, theta, gamma1, gamma2)


@dataclass(frozen=True)
class GaussianLimit:
    delta: float
    mean: float
    variance: float
    hypothesis: str

    @property
    def sd(self) -> float:
        return math.sqrt(self.variance)


def limit_law(case, theta: float, gamma1: float = 0.0, gamma2: float = 0.0,
              hypothesis: str = "null") -> GaussianLimit:
    """Limit of ln L(theta) under the null or under the alternative theta."""
    if hypothesis not in ("null", "alternative"):
        raise DomainError(f"hypothesis must be 'null' or 'alternative', got {hypothesis!r}")
    d = delta_limit(case, theta, gamma1, gamma2)
    var = -0.5 * math.log1p(-d * d)
    mean = -0.5 * var if hypothesis == "null" else 0.5 * var
    return GaussianLimit(d, mean, var, hypothesis)


def limit_cov(case, theta1: float, theta2: float, gamma1: float = 0.0, gamma2: float = 0.0) -> float:
    """Cov(ln L(theta1), ln L(theta2)) in the limit."""
    d1 = delta_limit(case, theta1, gamma1, gamma2)
    d2 = delta_limit(case, theta2, gamma1, gamma2)
    return -0.5 * math.log1p(-d1 * d2)


def predicted_mean(case, theta: float, theta_true: float, gamma1: float = 0.0,
                   gamma2: float = 0.0) -> float:
    """Limit mean of ln L(theta) when the data follow theta_true (< threshold)."""
    d = delta_limit(case, theta, gamma1, gamma2)
    d0 = delta_limit(case, theta_true, gamma1, gamma2)
    return 0.25 * math.log1p(-d * d) - 0.5 * math.log1p(-d * d0)


def power_envelope(case, theta, alpha: float = 0.05, gamma1: float = 0.0, gamma2: float = 0.0):
    """Asymptotic power envelope; equals 1 at and above the threshold."""
    if not 0.0 < alpha < 1.0:
        raise DomainError("alpha must lie in (0, 1)")
    th = np.asarray(theta, dtype=float)
    if np.any(th < 0):
        raise DomainError("theta must be nonnegative")
    thr = _family_threshold(case, gamma1, gamma2)
    out = np.ones_like(th)
    below = th < thr
    d = np.array([_delta(case, t, gamma1, gamma2) for t in th[below]])
    shift = np.sqrt(-0.5 * np.log1p(-d * d))
    vals = stats.norm.sf(stats.norm.isf(alpha) - shift)
    # sf(isf(alpha)) is off by rounding, so theta = 0 returns alpha itself
    out[below] = np.where(shift == 0.0, alpha, vals)
    return out if out.ndim else float(out)


def np_test(lnL: float, case, theta: float, alpha: float = 0.05, gamma1: float = 0.0,
            gamma2: float = 0.0) -> str:
    """Neyman-Pearson decision for the point alternative theta."""
    lim = limit_law(case, theta, gamma1, gamma2, "null")
    crit = lim.mean + lim.sd * stats.norm.isf(alpha)
    return "reject" if lnL > crit else "accept"


# --------------------------------------------------------------------------
# Monte Carlo


@dataclass
class MCSummary:
    spec: dict
    theta_grid: list
    theta_true: float
    replicates: int
    seed: int
    method: str
    alpha: float
    critical: str
    mean: list
    variance: list
    cov: list
    mean_L: list
    ks: list
    rejection: list
    predicted_mean: list
    predicted_variance: list
    predicted_cov: list
    power_envelope: list
    flagged: list
    config: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True, default=_json_default)


def _json_default(x):
    if isinstance(x, (np.floating, np.integer)):
        return x.item()
    raise TypeError(type(x))


def _one_replicate(args):
    spec, grid, theta_true, seed, method = args
    smp = sample_case(spec, theta_true, seed)
    out = np.empty(len(grid))
    flags = np.zeros(len(grid), dtype=bool)
    for k, th in enumerate(grid):
        if method == "laplace":
            r = lr_laplace(spec, th, smp)
            out[k], flags[k] = r.log_value, r.flags["g_II_unity"]
        elif method == "quadrature":
            r = lr_quadrature(spec, th, smp)
            out[k], flags[k] = r.log_value, r.flags.get("reanchored", False)
        else:
            out[k], flags[k] = log_lr_asymptotic(spec, th, smp)
    return out, flags


def _run(spec, grid, theta_true, seeds, method, workers):
    tasks = [(spec, tuple(grid), theta_true, s, method) for s in seeds]
    if workers <= 1:
        res = [_one_replicate(t) for t in tasks]
    else:
        chunk = max(1, len(tasks) // (4 * workers))
        with ProcessPoolExecutor(max_workers=workers) as ex:
            # map preserves task order, so results do not depend on scheduling
            res = list(ex.map(_one_replicate, tasks, chunksize=chunk))
    lnl = np.array([r[0] for r in res])
    flags = np.array([r[1] for r in res])
    return lnl, flags


def monte_carlo(spec: CaseSpec, theta_grid, theta_true: float = 0.0, replicates: int = 100,
                seed: int = 0, workers: int = 1, *, method: str = "asymptotic",
                alpha: float = 0.05, critical: str = "asymptotic", record: str | None = None,
                config: dict | None = None) -> MCSummary:
    """Simulate ln L(theta) over ``theta_grid`` and compare with the Gaussian limit.

    Replicate ``i`` draws its data from ``replicate_seed(seed, i)``, so the
    summary is identical for any number of workers.  With
    ``critical="simulated"`` the test uses empirical null quantiles from an
    independent null batch instead of the Gaussian critical values.
    ``record`` writes one CSV row per replicate.
    """
    if replicates < 1:
        raise ValidationError("replicates must be at least 1")
    if method not in ("asymptotic", "laplace", "quadrature"):
        raise ValidationError(f"unknown method {method!r}")
    if critical not in ("asymptotic", "simulated"):
        raise ValidationError(f"unknown critical-value mode {critical!r}")
    grid = [float(t) for t in theta_grid]
    if not grid:
        raise ValidationError("theta grid is empty")
    g1, g2 = spec.c1, spec.c2
    seeds = [replicate_seed(seed, i) for i in range(replicates)]
    lnl, flags = _run(spec, grid, theta_true, seeds, method, workers)

    pm, pv = [], []
    for th in grid:
        lim = limit_law(spec.case, th, g1, g2)
        pv.append(lim.variance)
        pm.append(predicted_mean(spec.case, th, theta_true, g1, g2)
                  if theta_true < _family_threshold(spec.case, g1, g2) else math.nan)
    pcov = [[limit_cov(spec.case, a, b, g1, g2) for b in grid] for a in grid]

    if critical == "asymptotic":
        crit = [pmn + math.sqrt(v) * stats.norm.isf(alpha)
                for pmn, v in zip([-0.5 * v for v in pv], pv)]
    else:
        if theta_true == 0.0:
            null = lnl
        else:
            null_seeds = [replicate_seed(seed, replicates + i) for i in range(replicates)]
            null, _ = _run(spec, grid, 0.0, null_seeds, method, workers)
        crit = list(np.quantile(null, 1.0 - alpha, axis=0))
    rej = [float(np.mean(lnl[:, k] > crit[k])) for k in range(len(grid))]
    ks = []
    for k in range(len(grid)):
        if math.isnan(pm[k]) or replicates < 2:
            ks.append(math.nan)
        else:
            ks.append(float(stats.kstest(lnl[:, k], "norm", args=(pm[k], math.sqrt(pv[k]))).statistic))
    ddof = 1 if replicates > 1 else 0
    cov = np.atleast_2d(np.cov(lnl, rowvar=False, ddof=ddof)) if replicates > 1 else np.zeros((len(grid),) * 2)
    pe = [float(power_envelope(spec.case, th, alpha, g1, g2)) for th in grid]
    if record:
        _write_record(record, grid, seeds, lnl, flags)
    return MCSummary(
        spec=spec.to_dict(), theta_grid=grid, theta_true=float(theta_true),
        replicates=int(replicates), seed=int(seed), method=method, alpha=float(alpha),
        critical=critical,
        mean=[float(x) for x in lnl.mean(axis=0)],
        variance=[float(x) for x in (lnl.var(axis=0, ddof=ddof))],
        cov=[[float(x) for x in row] for row in cov],
        mean_L=[float(x) for x in np.exp(lnl).mean(axis=0)],
        ks=ks, rejection=rej, predicted_mean=pm, predicted_variance=pv, predicted_cov=pcov,
        power_envelope=pe, flagged=[int(x) for x in flags.sum(axis=0)],
        config=dict(config or {}),
    )


def _write_record(path, grid, seeds, lnl, flags):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["replicate", "seed"] + [f"lnL_{k}" for k in range(len(grid))]
               + [f"flag_{k}" for k in range(len(grid))])
    for i, s in enumerate(seeds):
        w.writerow([i, s] + [repr(float(x)) for x in lnl[i]] + [int(x) for x in flags[i]])
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(buf.getvalue())
