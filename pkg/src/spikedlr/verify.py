"""Quick invariant suite behind ``spikedlr verify``.

Each check returns ``(passed, detail)``; ``run_checks`` collects them into
rows of a pass/fail table.  The whole suite takes a few seconds.
"""

from __future__ import annotations

import csv
import io
import math
import time
import warnings
from typing import Callable

import numpy as np

from .ensembles import CaseSpec, sample_case
from .errors import DomainWarning, SpikedLRError
from .inference import power_envelope
from .lrengine import d2, laplace_parts, lr_laplace, lr_quadrature, threshold_p
from .spectra import LimitLaw, law_for, lss_expectation, stieltjes, support, threshold
from .specfun import in_omega, log_approx_0F1, log_approx_Fj, log_hyp_series

__all__ = ["CHECKS", "run_checks", "format_table", "specfun_sweep", "default_specs"]


def default_specs() -> list[CaseSpec]:
    """One moderate configuration per case."""
    return [
        CaseSpec("SMD", 40),
        CaseSpec("PCA", 40, 160),
        CaseSpec("SigD", 40, 160, 160),
        CaseSpec("REG0", 40, 160),
        CaseSpec("REG", 40, 160, 160),
        CaseSpec("CCA", 40, 160, 160),
    ]


def _laws():
    return [LimitLaw("SC"), LimitLaw("MP", 0.5), LimitLaw("W", 0.25, 0.25), LimitLaw("W", 0.9, 0.9)]


def check_threshold():
    thr = threshold(LimitLaw("W", 0.9, 0.9))
    return abs(thr - 18.95) <= 0.01, f"theta_bar={thr:.6f}"


def check_envelope_size():
    vals = [power_envelope(c, 0.0, 0.05, 0.9, g2) for c, g2 in (("SMD", 0), ("PCA", 0), ("SigD", 0.9))]
    return all(v == 0.05 for v in vals), f"PE(0)={vals}"


def check_normalization():
    err = max(abs(lss_expectation(law, lambda x: 1.0) - 1.0) for law in _laws())
    return err < 1e-10, f"max |int dF - 1|={err:.2e}"


def check_stieltjes():
    err = 0.0
    for law in _laws():
        z = support(law)[1] + 0.7 + 0.3j
        num = lss_expectation(law, lambda x: 1.0 / (x - z))
        err = max(err, abs(num - stieltjes(law, z)))
    return err < 1e-9, f"max |m - quad|={err:.2e}"


def check_saddle():
    worst_f, worst_d = 0.0, 0.0
    for spec in default_specs():
        for frac in (0.3, 0.6, 0.9):
            th = frac * threshold_p(spec)
            lp = laplace_parts(spec, th)
            worst_f = max(worst_f, abs(lp.f(lp.z0)))
            worst_d = max(worst_d, abs(lp.f_deriv(lp.z0)))
    ok = worst_f < 1e-7 and worst_d < 1e-8
    return ok, f"max|f(z0)|={worst_f:.1e} max|f'(z0)|={worst_d:.1e}"


def second_derivative(lp, z0, h):
    """Richardson-extrapolated central difference of the analytic f'."""
    def cd(step):
        return (lp.f_deriv(z0 + step) - lp.f_deriv(z0 - step)).real / (2.0 * step)
    return (4.0 * cd(h / 2.0) - cd(h)) / 3.0


def check_second_derivative():
    worst = 0.0
    for spec in default_specs():
        for frac in (0.2, 0.5, 0.8):
            th = frac * threshold_p(spec)
            lp = laplace_parts(spec, th)
            h = (lp.z0 - law_for(spec).support[1]) / 50.0
            want = -th**2 / (2.0 * d2(spec, th))
            worst = max(worst, abs(second_derivative(lp, lp.z0, h) / want - 1.0))
    return worst < 1e-6, f"max rel err={worst:.1e}"


def check_specfun():
    m = 200.0
    errs = []
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", DomainWarning)
        for eta in (0.5, 1.0 + 1.0j, -0.1 + 0.5j):
            ref = log_hyp_series("0F1", (), m + 1.0, m * m * eta)
            errs.append(abs(np.expm1(log_approx_0F1(m, eta) - ref)))
        for eta in (0.8, 0.5 + 0.5j):
            ref = log_hyp_series("1F1", (m * 2.0 + 1.0,), m + 1.0, m * eta)
            errs.append(abs(np.expm1(log_approx_Fj(1, m, 2.0, eta) - ref)))
        for eta in (0.3, -0.2 + 0.2j):
            a = m * 2.0 + 1.0
            ref = log_hyp_series("2F1", (a, a), m + 1.0, eta)
            errs.append(abs(np.expm1(log_approx_Fj(2, m, 2.0, eta) - ref)))
    worst = max(errs)
    return worst < 1e-2, f"max rel err at m=200: {worst:.1e}"


def check_pca_p1():
    # p = 1: L is the ratio of two scaled chi-square densities
    spec = CaseSpec("PCA", 1, 20)
    th = 0.15
    lam = np.array([0.8])
    want = -10.0 * math.log1p(th) + 10.0 * lam[0] * th / (1.0 + th)
    got = lr_quadrature(spec, th, lam).log_value
    return abs(got - want) < 1e-9, f"|diff|={abs(got - want):.1e}"


def check_laplace_vs_quadrature():
    spec = CaseSpec("SMD", 40)
    smp = sample_case(spec, 0.0, 7)
    a = lr_laplace(spec, 0.5, smp).value
    b = lr_quadrature(spec, 0.5, smp).value
    return abs(a / b - 1.0) < 0.05, f"laplace/quadrature - 1 = {a / b - 1.0:.2e}"


def check_sampler():
    spec = CaseSpec("SigD", 20, 60, 60)
    a = sample_case(spec, 0.3, 5).values
    b = sample_case(spec, 0.3, 5).values
    c = sample_case(spec, 0.3, 6).values
    ok = np.array_equal(a, b) and not np.array_equal(a, c) and np.all(np.diff(a) <= 0)
    return bool(ok), "same seed reproduces, other seed differs"


def check_phase_transition():
    spec = CaseSpec("PCA", 200, 400)
    thr = threshold_p(spec)
    hi = support(law_for(spec))[1]
    sub = [sample_case(spec, 0.5 * thr, s).values[0] for s in range(5)]
    sup = [sample_case(spec, 2.0 * thr, s).values[0] for s in range(5)]
    ok = max(sub) <= hi + 0.3 and min(sup) > hi
    return ok, f"sub max={max(sub):.3f} edge={hi:.3f} super min={min(sup):.3f}"


CHECKS: list[tuple[str, Callable]] = [
    ("threshold_W_0.9", check_threshold),
    ("envelope_size", check_envelope_size),
    ("law_normalization", check_normalization),
    ("stieltjes_vs_quadrature", check_stieltjes),
    ("saddle_point", check_saddle),
    ("second_derivative", check_second_derivative),
    ("specfun_m200", check_specfun),
    ("quadrature_p1_oracle", check_pca_p1),
    ("laplace_vs_quadrature", check_laplace_vs_quadrature),
    ("sampler_determinism", check_sampler),
    ("phase_transition", check_phase_transition),
]


def run_checks(checks=None) -> list[tuple[str, bool, str, float]]:
    """Rows (name, passed, detail, seconds); exceptions count as failures."""
    rows = []
    for name, fn in checks or CHECKS:
        t = time.perf_counter()
        try:
            ok, detail = fn()
        except (SpikedLRError, ArithmeticError, ValueError) as exc:
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        rows.append((name, bool(ok), detail, time.perf_counter() - t))
    return rows


def format_table(rows) -> str:
    width = max(len(r[0]) for r in rows)
    lines = [f"{'check':<{width}}  result  seconds  detail"]
    for name, ok, detail, sec in rows:
        lines.append(f"{name:<{width}}  {'PASS' if ok else 'FAIL':<6}  {sec:7.2f}  {detail}")
    n_ok = sum(r[1] for r in rows)
    lines.append(f"{n_ok}/{len(rows)} checks passed")
    return "\n".join(lines)


def specfun_sweep(ms=(50, 100, 200, 400), eps=2.0, radii=(0.05, 0.5, 2.0), n_angles=8,
                  delta=0.1) -> str:
    """CSV rows (j, m, eta_re, eta_im, series, approx, relerr) over Omega grids.

    ``series`` and ``approx`` are logs (real part); relerr is
    |approx/series - 1|.  Points beyond the reach of the series are skipped.
    """
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["j", "m", "eta_re", "eta_im", "log_series", "log_approx", "relerr"])
    angles = np.linspace(-math.pi, math.pi, n_angles, endpoint=False) + math.pi / n_angles
    etas = [r * complex(math.cos(a), math.sin(a)) for r in radii for a in angles]
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", DomainWarning)
        for j in (0, 1, 2):
            for eta in etas:
                if j == 0 and not (abs(math.pi - abs(math.atan2(eta.imag, eta.real))) >= delta):
                    continue
                if j > 0 and not in_omega(j, eps, eta, delta):
                    continue
                for m in ms:
                    try:
                        if j == 0:
                            ref = log_hyp_series("0F1", (), m + 1.0, m * m * eta)
                            app = log_approx_0F1(m, eta)
                        elif j == 1:
                            ref = log_hyp_series("1F1", (m * eps + 1.0,), m + 1.0, m * eta)
                            app = log_approx_Fj(1, m, eps, eta)
                        else:
                            a = m * eps + 1.0
                            ref = log_hyp_series("2F1", (a, a), m + 1.0, eta)
                            app = log_approx_Fj(2, m, eps, eta)
                    except SpikedLRError:
                        continue
                    rel = abs(np.expm1(app - ref))
                    w.writerow([j, m, f"{eta.real:.17g}", f"{eta.imag:.17g}",
                                f"{ref.real:.17g}", f"{app.real:.17g}", f"{rel:.17g}"])
    return buf.getvalue()

