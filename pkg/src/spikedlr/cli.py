"""Command-line front end.

Subcommands: sample, spectrum, lr, envelope, mc, verify.  Structured output
is JSON, grids are CSV; every output embeds the resolved config and the
library version.  Exit codes: 0 success, 2 validation error, 3 numerical
domain error (including a failing ``verify`` check).  Errors go to stderr
prefixed ``ERR <code>:``.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys

import numpy as np

from . import __version__
from .ensembles import Case, CaseSpec, EigenSample, sample_case
from .errors import ConfigError, NumericalError, SpikedLRError, ValidationError
from .inference import monte_carlo, power_envelope
from .lrengine import METHODS, delta_p_value, evaluate
from .spectra import LimitLaw, cdf, density, support, threshold

__all__ = ["main", "run", "build_parser", "MC_KEYS", "EXIT_OK", "EXIT_VALIDATION", "EXIT_NUMERICAL"]

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_NUMERICAL = 3

SEED_ENV = "SPIKEDLR_SEED"

# accepted keys of an mc config file, with defaults (None = required)
MC_KEYS = {
    "case": None,
    "p": None,
    "n1": None,
    "n2": None,
    "theta_grid": None,
    "theta_true": 0.0,
    "replicates": 100,
    "seed": 0,
    "workers": 1,
    "method": "asymptotic",
    "alpha": 0.05,
    "critical": "asymptotic",
    "output": None,
    "record": None,
}
_MC_OPTIONAL = {"n1", "n2", "output", "record"}


class _Parser(argparse.ArgumentParser):
    """argparse with errors routed through the ERR prefix and exit code 2."""

    def error(self, message):
        raise ConfigError(message)


def g17(x) -> str:
    """Float with 17 significant digits."""
    return format(float(x), ".17g")


def _dumps(obj) -> str:
    # json writes floats with repr, the shortest string that round-trips
    return json.dumps(obj, indent=2, sort_keys=True, allow_nan=True) + "\n"


def _provenance(config: dict) -> dict:
    return {"config": config, "version": __version__}


def _emit(text: str, path: str | None) -> None:
    if path in (None, "-"):
        sys.stdout.write(text)
        return
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)


def _seed(value) -> int:
    env = os.environ.get(SEED_ENV)
    if env is not None and env.strip() != "":
        try:
            return int(env)
        except ValueError as exc:
            raise ConfigError(f"{SEED_ENV}={env!r} is not an integer") from exc
    return int(value)


def _spec(case, p, n1, n2) -> CaseSpec:
    case = Case.parse(case)
    if p is None:
        raise ConfigError("--p is required")
    return CaseSpec(case, int(p), None if case is Case.SMD else n1,
                    n2 if case.two_sample else None)


def _law(case, g1, g2) -> LimitLaw:
    case = Case.parse(case)
    fam = case.family
    if fam == "SC":
        return LimitLaw("SC")
    if g1 is None or not 0.0 < g1 < 1.0:
        raise ConfigError(f"{case.value} needs --gamma1 in (0, 1)")
    if fam == "W":
        if g2 is None or not 0.0 <= g2 <= 1.0:
            raise ConfigError(f"{case.value} needs --gamma2 in [0, 1]")
        return LimitLaw("W", g1, g2)
    return LimitLaw("MP", g1)


def _grid_size(n) -> int:
    if n < 2:
        raise ConfigError("--grid must be at least 2")
    return n


# --------------------------------------------------------------------------
# subcommands


def cmd_sample(args) -> int:
    spec = _spec(args.case, args.p, args.n1, args.n2)
    seed = _seed(args.seed)
    config = {"subcommand": "sample", **spec.to_dict(), "theta": args.theta, "seed": seed}
    smp = sample_case(spec, args.theta, seed)
    smp.meta = _provenance(config)
    _emit(smp.to_csv() if args.format == "csv" else smp.to_json() + "\n", args.out)
    return EXIT_OK


def cmd_spectrum(args) -> int:
    law = _law(args.case, args.gamma1, args.gamma2)
    lo, hi = support(law)
    pad = 0.05 * (hi - lo)
    a = lo - pad if args.lo is None else args.lo
    b = hi + pad if args.hi is None else args.hi
    if not b > a:
        raise ConfigError("need --hi > --lo")
    grid = np.linspace(a, b, _grid_size(args.grid))
    config = {"subcommand": "spectrum", "case": Case.parse(args.case).value, "family": law.family,
              "gamma1": law.c1, "gamma2": law.c2, "lo": a, "hi": b, "grid": len(grid)}
    buf = io.StringIO()
    buf.write("# " + json.dumps(_provenance(config), sort_keys=True) + "\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["lambda", "density", "cdf"])
    for x, d, c in zip(grid, density(law, grid), cdf(law, grid)):
        w.writerow([g17(x), g17(d), g17(c)])
    _emit(buf.getvalue(), args.out)
    return EXIT_OK


def _read_eigs(path: str) -> EigenSample:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from exc
    try:
        if text.lstrip().startswith("{"):
            return EigenSample.from_json(text)
        return EigenSample.from_csv(text)
    except (ValueError, KeyError) as exc:
        raise ConfigError(f"cannot parse eigenvalues in {path}: {exc}") from exc


def cmd_lr(args) -> int:
    if args.eigs:
        smp = _read_eigs(args.eigs)
        spec = smp.spec
        given = {"case": args.case, "p": args.p, "n1": args.n1, "n2": args.n2}
        for key, val in given.items():
            if val is None:
                continue
            have = spec.to_dict()[key]
            if key == "case":
                val = Case.parse(val).value
            if have is not None and val != have:
                raise ConfigError(f"--{key}={val} disagrees with {args.eigs} ({key}={have})")
        source = {"eigs": args.eigs, "seed": smp.seed, "theta_true": smp.theta_true}
    else:
        if args.case is None:
            raise ConfigError("--case is required without --eigs")
        spec = _spec(args.case, args.p, args.n1, args.n2)
        seed = _seed(args.seed)
        smp = sample_case(spec, args.theta_true, seed)
        source = {"seed": seed, "theta_true": args.theta_true}
    methods = METHODS if args.method == "all" else (args.method,)
    res = evaluate(spec, args.theta, smp, methods)
    config = {"subcommand": "lr", **spec.to_dict(), "theta": args.theta, "method": args.method,
              **source}
    logl = {m: getattr(res, f"log_{m}") for m in methods}
    # delta_p is the finite-p delta(theta); Delta_p the centred log-determinant
    out = {**_provenance(config), "case": res.case, "theta": res.theta, "z0": res.z0,
           "delta_p": delta_p_value(spec, args.theta), "Delta_p": res.delta_p, "logL": logl,
           "flags": res.flags}
    _emit(_dumps(out), args.out)
    return EXIT_OK


def cmd_envelope(args) -> int:
    case = Case.parse(args.case)
    if not 0.0 < args.alpha < 1.0:
        raise ConfigError("--alpha must lie in (0, 1)")
    law = _law(case, args.gamma1, args.gamma2)
    thr = threshold(law) if not (law.family == "W" and law.c2 >= 1.0) else math.inf
    top = args.theta_max
    if top is None:
        top = 1.25 * thr if math.isfinite(thr) else 50.0
    if not top > 0:
        raise ConfigError("--theta-max must be positive")
    grid = np.linspace(0.0, top, _grid_size(args.grid))
    pe = power_envelope(case, grid, args.alpha, law.c1, law.c2)
    config = {"subcommand": "envelope", "case": case.value, "alpha": args.alpha,
              "gamma1": law.c1, "gamma2": law.c2, "theta_max": top, "grid": len(grid),
              "threshold": thr}
    buf = io.StringIO()
    buf.write("# " + json.dumps(_provenance(config), sort_keys=True) + "\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["theta", "PE"])
    for t, v in zip(grid, pe):
        w.writerow([g17(t), g17(v)])
    _emit(buf.getvalue(), args.out)
    return EXIT_OK


def load_mc_config(path: str) -> dict:
    """Read and validate an mc config; unknown keys are rejected."""
    try:
        with open(path, encoding="utf-8") as fh:
            raw = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path} is not valid JSON: {exc}") from exc
    if not isinstance(raw, dict):
        raise ConfigError("mc config must be a JSON object")
    unknown = sorted(set(raw) - set(MC_KEYS))
    if unknown:
        raise ConfigError(f"unknown config key(s): {', '.join(unknown)}")
    cfg = {}
    for key, default in MC_KEYS.items():
        if key in raw:
            cfg[key] = raw[key]
        elif default is None and key not in _MC_OPTIONAL:
            raise ConfigError(f"missing required config key {key!r}")
        else:
            cfg[key] = default
    cfg["seed"] = _seed(cfg["seed"])
    grid = cfg["theta_grid"]
    if not isinstance(grid, list) or not grid or not all(isinstance(t, (int, float)) for t in grid):
        raise ConfigError("theta_grid must be a non-empty list of numbers")
    if any(t <= 0 for t in grid):
        raise ConfigError("theta_grid values must be positive")
    for key in ("replicates", "workers", "p"):
        if not isinstance(cfg[key], int) or cfg[key] < 1:
            raise ConfigError(f"{key} must be a positive integer")
    return cfg


def cmd_mc(args) -> int:
    cfg = load_mc_config(args.config)
    spec = _spec(cfg["case"], cfg["p"], cfg["n1"], cfg["n2"])
    cfg["case"] = spec.case.value
    summary = monte_carlo(spec, cfg["theta_grid"], cfg["theta_true"], cfg["replicates"],
                          cfg["seed"], cfg["workers"], method=cfg["method"], alpha=cfg["alpha"],
                          critical=cfg["critical"], record=cfg["record"], config=cfg)
    out = {**summary.to_dict(), "version": __version__}
    _emit(_dumps(out), cfg["output"])
    return EXIT_OK


def cmd_verify(args) -> int:
    from .verify import format_table, run_checks, specfun_sweep

    rows = run_checks()
    sys.stdout.write(format_table(rows) + "\n")
    if args.specfun_check:
        text = specfun_sweep()
        config = {"subcommand": "verify", "specfun_check": args.specfun_check}
        _emit("# " + json.dumps(_provenance(config), sort_keys=True) + "\n" + text,
              args.specfun_check)
    return EXIT_OK if all(r[1] for r in rows) else EXIT_NUMERICAL


# --------------------------------------------------------------------------


def _add_dims(p, required_case=True):
    p.add_argument("--case", required=required_case, help="SMD, PCA, SigD, REG0, REG or CCA")
    p.add_argument("--p", type=int, help="dimension")
    p.add_argument("--n1", type=int, help="first sample size (all cases but SMD)")
    p.add_argument("--n2", type=int, help="second sample size (SigD, REG, CCA)")


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="spikedlr", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=f"spikedlr {__version__}")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sp = sub.add_parser("sample", help="draw one eigenvalue sample")
    _add_dims(sp)
    sp.add_argument("--theta", type=float, default=0.0, help="spike size of the data")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--format", choices=("json", "csv"), default="json")
    sp.add_argument("--out", help="output file (default stdout)")
    sp.set_defaults(func=cmd_sample)

    sp = sub.add_parser("spectrum", help="density and cdf of a limit law on a grid")
    sp.add_argument("--case", required=True)
    sp.add_argument("--gamma1", type=float)
    sp.add_argument("--gamma2", type=float, default=0.0)
    sp.add_argument("--grid", type=int, default=200)
    sp.add_argument("--lo", type=float)
    sp.add_argument("--hi", type=float)
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_spectrum)

    sp = sub.add_parser("lr", help="log likelihood ratio by one or all methods")
    _add_dims(sp, required_case=False)
    sp.add_argument("--theta", type=float, required=True, help="point alternative")
    sp.add_argument("--theta-true", type=float, default=0.0, help="spike of the simulated data")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--method", choices=METHODS + ("all",), default="all")
    sp.add_argument("--eigs", help="eigenvalue file written by 'sample' (JSON or CSV)")
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_lr)

    sp = sub.add_parser("envelope", help="asymptotic power envelope on a theta grid")
    sp.add_argument("--case", required=True)
    sp.add_argument("--alpha", type=float, default=0.05)
    sp.add_argument("--gamma1", type=float)
    sp.add_argument("--gamma2", type=float, default=0.0)
    sp.add_argument("--grid", type=int, default=200)
    sp.add_argument("--theta-max", type=float)
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_envelope)

    sp = sub.add_parser("mc", help="Monte Carlo check of the Gaussian limit")
    sp.add_argument("--config", required=True, help="JSON config (see docs/config.md)")
    sp.set_defaults(func=cmd_mc)

    sp = sub.add_parser("verify", help="run the invariant suite")
    sp.add_argument("--specfun-check", metavar="CSV",
                    help="also write the special-function error sweep to CSV")
    sp.set_defaults(func=cmd_verify)
    return ap


def run(argv=None) -> int:
    """Run the CLI and return its exit code."""
    try:
        args = build_parser().parse_args(argv)
        return args.func(args)
    except ValidationError as exc:
        sys.stderr.write(f"ERR {exc.code}: {exc}\n")
        return EXIT_VALIDATION
    except NumericalError as exc:
        sys.stderr.write(f"ERR {exc.code}: {exc}\n")
        return EXIT_NUMERICAL
    except SpikedLRError as exc:
        sys.stderr.write(f"ERR {exc.code}: {exc}\n")
        return EXIT_VALIDATION


def main(argv=None) -> int:
    return run(argv)
