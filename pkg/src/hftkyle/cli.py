"""Command-line front end.

Subcommands: solve, sweep, classify, simulate, fixed-point,
partial-equilibrium, limits. JSON goes to stdout as one document, sweeps and
classification grids as CSV; errors are JSON on stderr. Every float is printed
with 17 significant digits.

Parameters come either as ``--theta1/--thetaz`` (with ``--sigma-v/--sigma-2``
defaulting to 1) or as raw ``--sigma-1/--sigma-z``; mixing the two is an error.
A flat ``key=value`` config file (``--config`` or ``$HFTKYLE_CONFIG``) may set
any long option; the command line wins.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .equilibrium import (
    THETA1_ALWAYS_BENEFITED,
    WelfareClass,
    classify_welfare,
    equilibrium_from_thetas,
    limit_alpha_theta1_infinity,
    limit_alpha_theta1_zero,
    limit_theta_z_infinity,
    partial_equilibrium_no_fast_noise,
    solve_equilibrium,
    theta_z_bar,
)
from .errors import (
    DegenerateRegressor,
    HftKyleError,
    NoConvergence,
    ParameterError,
    RootCountError,
)
from .fixed_point import FixedPointConfig, multi_start, solve_fixed_point, solve_partial_fixed_point
from .model import (
    LinearStrategies,
    ModelParams,
    PricingCoefficients,
    SignalStructure,
    ThetaPair,
    dealer_pricing,
    hft_expected_profit_from,
    it_expected_profit,
)
from .sextic import limit_beta_theta1_infinity
from .simulator import SimulationConfig, simulate_game

CONFIG_ENV = "HFTKYLE_CONFIG"

EXIT_OK, EXIT_VALIDATION, EXIT_SOLVER, EXIT_REGRESSION, EXIT_NO_CONVERGENCE = 0, 2, 3, 4, 5

SWEEP_HEADER = ["theta1", "thetaz", "beta", "alpha_norm", "profit_it_norm", "profit_hft_norm",
                "lambda1", "mu1", "mu2", "welfare"]
BASELINE_HEADER = ["baseline_alpha_norm", "baseline_profit_it_norm"]
CLASSIFY_HEADER = ["theta1", "thetaz", "welfare", "theta_z_bar_if_applicable"]


# --- output -----------------------------------------------------------------

def fmt(x) -> str:
    return format(float(x), ".17g")


def to_json(obj, indent=2, _level=0) -> str:
    """json.dumps lookalike that prints floats with 17 significant digits."""
    pad = " " * (indent * (_level + 1))
    end = " " * (indent * _level)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {to_json(v, indent, _level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        items = [pad + to_json(v, indent, _level + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    if obj is None or isinstance(obj, bool):
        return json.dumps(obj)
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        if not math.isfinite(obj):
            return "null"
        text = fmt(obj)
        # keep floats floats for JSON readers
        return text if any(ch in text for ch in ".en") else text + ".0"
    return json.dumps(str(obj))


class CliError(Exception):
    def __init__(self, code, kind, message, **extra):
        super().__init__(message)
        self.code, self.kind, self.extra = code, kind, extra


def _exit_code(exc: HftKyleError) -> int:
    if isinstance(exc, ParameterError):
        return EXIT_VALIDATION
    if isinstance(exc, NoConvergence):
        return EXIT_NO_CONVERGENCE
    if isinstance(exc, DegenerateRegressor):
        return EXIT_REGRESSION
    return EXIT_SOLVER


def _error_payload(exc: HftKyleError) -> dict:
    extra = {}
    if isinstance(exc, RootCountError):
        extra = {"roots": exc.roots, "rejected": exc.rejected, "coefficients": exc.coefficients}
    elif isinstance(exc, NoConvergence):
        extra = {"trajectory_tail": [list(s) for s in exc.trajectory_tail]}
    return extra


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise CliError(EXIT_VALIDATION, "UsageError", f"{self.prog}: {message}")


# --- parameters -------------------------------------------------------------

def _add_param_args(p, require_theta1=True):
    g = p.add_argument_group("parameters")
    g.add_argument("--theta1", type=float, default=None, help="sigma_1^2 / sigma_2^2")
    g.add_argument("--thetaz", type=float, default=None, help="sigma_z^2 / sigma_2^2")
    g.add_argument("--sigma-v", type=float, default=1.0)
    g.add_argument("--sigma-2", type=float, default=1.0)
    g.add_argument("--sigma-1", type=float, default=None, help="raw form; excludes --theta1/--thetaz")
    g.add_argument("--sigma-z", type=float, default=None, help="raw form; excludes --theta1/--thetaz")


def resolve_params(args, theta1_default=None):
    """(params, thetas, theta_form) from the parameter flags."""
    raw = args.sigma_1 is not None or args.sigma_z is not None
    theta = args.theta1 is not None or args.thetaz is not None
    if raw and theta:
        raise ParameterError("give parameters either as --theta1/--thetaz or as raw sigmas, not both")
    if raw:
        params = ModelParams(sigma_v=args.sigma_v, sigma_1=args.sigma_1 if args.sigma_1 is not None else 0.0,
                             sigma_2=args.sigma_2, sigma_z=args.sigma_z if args.sigma_z is not None else 0.0)
        return params, params.thetas, False
    theta1 = args.theta1 if args.theta1 is not None else theta1_default
    if theta1 is None:
        raise ParameterError("--theta1 is required")
    thetaz = args.thetaz if args.thetaz is not None else 0.0
    for name, value in (("theta1", theta1), ("thetaz", thetaz)):
        if not math.isfinite(value):
            raise ParameterError(f"{name} must be finite")
        if value < 0:
            raise ParameterError(f"{name} must be >= 0, got {value!r}")
    params = ModelParams.from_thetas(theta1, thetaz, args.sigma_v, args.sigma_2)
    return params, ThetaPair(theta1, thetaz), True


def _solve(params, thetas, theta_form):
    if theta_form:
        return equilibrium_from_thetas(thetas, params.sigma_v, params.sigma_2)
    return solve_equilibrium(params)


# --- subcommands ------------------------------------------------------------

def cmd_solve(args, out):
    params, thetas, theta_form = resolve_params(args)
    eq = _solve(params, thetas, theta_form)
    welfare = classify_welfare(thetas)
    doc = {
        "theta1": thetas.theta_1, "thetaz": thetas.theta_z,
        "sigma_v": params.sigma_v, "sigma_2": params.sigma_2,
        "beta": eq.beta, "alpha": eq.alpha, "alpha_normalized": eq.alpha_normalized,
        "lambda1": eq.pricing.lambda_1, "mu1": eq.pricing.mu_1, "mu2": eq.pricing.mu_2,
        "lambda2": eq.lambda_2,
        "profit_it": eq.profit_it, "profit_hft": eq.profit_hft,
        "profit_it_normalized": eq.profit_it_normalized,
        "profit_hft_normalized": eq.profit_hft_normalized,
        "welfare": welfare.value,
        "solver": {"residual": eq.meta["residual"], "method": eq.meta["method"]},
        "notes": {"lambda2": eq.meta["lambda_2_definition"]},
    }
    out.write(to_json(doc) + "\n")


@dataclass(frozen=True)
class SweepSpec:
    axis: str
    start: float
    stop: float
    points: int
    scale: str
    held: float
    sigma_v: float = 1.0
    sigma_2: float = 1.0

    def __post_init__(self):
        if self.axis not in ("theta1", "thetaz"):
            raise ParameterError(f"axis must be theta1 or thetaz, got {self.axis!r}")
        if self.scale not in ("linear", "log"):
            raise ParameterError(f"scale must be linear or log, got {self.scale!r}")
        if not self.start < self.stop:
            raise ParameterError("sweep needs from < to")
        if self.scale == "log" and not self.start > 0:
            raise ParameterError("log scale needs from > 0")
        if self.points < 2:
            raise ParameterError("sweep needs at least 2 points")
        if not (math.isfinite(self.held) and self.held >= 0):
            raise ParameterError("held value must be finite and >= 0")

    def grid(self):
        if self.scale == "log":
            return [float(x) for x in np.geomspace(self.start, self.stop, self.points)]
        return [float(x) for x in np.linspace(self.start, self.stop, self.points)]

    def thetas(self):
        for value in self.grid():
            yield (value, self.held) if self.axis == "theta1" else (self.held, value)


def sweep_row(theta1, thetaz, sigma_v=1.0, sigma_2=1.0, baseline=False):
    try:
        thetas = ThetaPair(theta1, thetaz)
        eq = equilibrium_from_thetas(thetas, sigma_v, sigma_2)
        welfare = classify_welfare(thetas).value
        row = [fmt(theta1), fmt(thetaz), fmt(eq.beta), fmt(eq.alpha_normalized),
               fmt(eq.profit_it_normalized), fmt(eq.profit_hft_normalized),
               fmt(eq.pricing.lambda_1), fmt(eq.pricing.mu_1), fmt(eq.pricing.mu_2), welfare]
    except HftKyleError as exc:
        row = [fmt(theta1), fmt(thetaz)] + [""] * 7 + [f"error:{type(exc).__name__}"]
    if baseline:
        row += [fmt(1.0), fmt(1.0)]
    return row


def _sweep_row_star(job):
    return sweep_row(*job)


def _parallel_rows(jobs, n_jobs):
    if n_jobs > 1:
        with ProcessPoolExecutor(n_jobs) as pool:
            return list(pool.map(_sweep_row_star, jobs, chunksize=8))
    return [_sweep_row_star(j) for j in jobs]


def cmd_sweep(args, out):
    spec = SweepSpec(axis=args.axis, start=args.start, stop=args.stop, points=args.points,
                     scale=args.scale, held=args.held, sigma_v=args.sigma_v, sigma_2=args.sigma_2)
    jobs = [(t1, tz, spec.sigma_v, spec.sigma_2, args.baseline) for t1, tz in spec.thetas()]
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(SWEEP_HEADER + (BASELINE_HEADER if args.baseline else []))
    writer.writerows(_parallel_rows(jobs, args.jobs))


def _axis(values, name):
    start, stop, n = values
    n = int(n)
    if n < 1 or (n > 1 and not start < stop):
        raise ParameterError(f"bad {name} range {values!r}")
    return [float(x) for x in np.linspace(start, stop, n)]


def _log_axis(values, name):
    start, stop, n = values
    if not start > 0:
        raise ParameterError(f"log {name} range needs a positive start")
    return [float(x) for x in np.geomspace(start, stop, int(n))]


def classify_row(theta1, thetaz, tol=1e-9):
    try:
        welfare = classify_welfare(ThetaPair(theta1, thetaz), tol).value
    except HftKyleError as exc:
        welfare = f"error:{type(exc).__name__}"
    bar = fmt(theta_z_bar(theta1)) if 0 < theta1 <= THETA1_ALWAYS_BENEFITED else ""
    return [fmt(theta1), fmt(thetaz), welfare, bar]


def cmd_classify(args, out):
    t1s = (_log_axis if args.theta1_scale == "log" else _axis)(args.theta1_range, "theta1")
    tzs = (_log_axis if args.thetaz_scale == "log" else _axis)(args.thetaz_range, "thetaz")
    if min(t1s) <= 0:
        raise ParameterError("theta1 must be > 0 on the whole grid")
    if min(tzs) < 0:
        raise ParameterError("thetaz must be >= 0 on the whole grid")
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(CLASSIFY_HEADER)
    for t1 in t1s:
        for tz in tzs:
            writer.writerow(classify_row(t1, tz, args.tol))


def _field(estimate, target):
    return {"estimate": estimate.value, "se": estimate.se, "analytic": target,
            "z": estimate.z_score(target)}


def cmd_simulate(args, out):
    structure = SignalStructure(args.signal)
    if args.partial_beta is not None:
        if args.no_hft:
            raise ParameterError("--partial-beta and --no-hft are exclusive")
        params, thetas, _ = resolve_params(args, theta1_default=0.0)
        if params.sigma_1 != 0:
            raise ParameterError("--partial-beta needs theta1 = 0 (sigma_1 = 0)")
        alpha, _ = partial_equilibrium_no_fast_noise(args.partial_beta, thetas.theta_z, params)
        strategies = LinearStrategies(alpha=alpha, beta=args.partial_beta)
        mode = "partial-equilibrium"
    elif args.no_hft:
        params, thetas, _ = resolve_params(args, theta1_default=1.0)
        strategies = LinearStrategies(alpha=params.sigma_2 / params.sigma_v, beta=0.0)
        mode = "no-hft"
    else:
        params, thetas, theta_form = resolve_params(args)
        if structure is SignalStructure.OWN_ORDER:
            eq = _solve(params, thetas, theta_form)
        else:
            eq = solve_fixed_point(params, structure)
        strategies = eq.strategies
        mode = "equilibrium"
    if mode == "no-hft":
        pricing = PricingCoefficients(lambda_1=0.0, mu_1=0.0, mu_2=params.sigma_v / (2 * params.sigma_2))
    else:
        pricing = dealer_pricing(strategies, params, structure)
    config = SimulationConfig(n_paths=args.paths, seed=args.seed, antithetic=args.antithetic,
                              workers=args.workers)
    res = simulate_game(params, strategies, pricing, structure, config)
    fields = {
        "profit_it": _field(res.est_profit_it, it_expected_profit(strategies, pricing, params, structure)),
        "profit_hft": _field(res.est_profit_hft,
                             hft_expected_profit_from(strategies, pricing, params, structure)),
        "lambda1": _field(res.lambda_1, pricing.lambda_1),
        "mu1": _field(res.mu_1, pricing.mu_1),
        "mu2": _field(res.mu_2, pricing.mu_2),
    }
    doc = {
        "mode": mode, "signal": structure.value,
        "theta1": thetas.theta_1, "thetaz": thetas.theta_z,
        "sigma_v": params.sigma_v, "sigma_2": params.sigma_2,
        "alpha": strategies.alpha, "beta": strategies.beta,
        "n_paths": res.n_paths, "seed": res.seed, "antithetic": res.antithetic,
        "backend": res.backend,
        "fields": fields,
        "max_abs_z": max(abs(f["z"]) for f in fields.values()),
    }
    out.write(to_json(doc) + "\n")


def _welfare_from_alpha(alpha_norm, tol=1e-9):
    if abs(alpha_norm - 1) <= tol:
        return WelfareClass.BOUNDARY.value
    return (WelfareClass.BENEFITED if alpha_norm > 1 else WelfareClass.HARMED).value


def _eq_doc(eq):
    return {
        "beta": eq.beta, "alpha": eq.alpha, "alpha_normalized": eq.alpha_normalized,
        "lambda1": eq.pricing.lambda_1, "mu1": eq.pricing.mu_1, "mu2": eq.pricing.mu_2,
        "lambda2": eq.lambda_2, "profit_it": eq.profit_it, "profit_hft": eq.profit_hft,
        "profit_it_normalized": eq.profit_it_normalized,
        "profit_hft_normalized": eq.profit_hft_normalized,
    }


def cmd_fixed_point(args, out):
    params, thetas, theta_form = resolve_params(args)
    structure = SignalStructure(args.signal)
    config = FixedPointConfig(damping=args.damping, tol=args.tol, max_iter=args.max_iter)
    eq = solve_fixed_point(params, structure, config)
    doc = {"signal": structure.value, "theta1": thetas.theta_1, "thetaz": thetas.theta_z,
           "sigma_v": params.sigma_v, "sigma_2": params.sigma_2,
           **_eq_doc(eq),
           "welfare": _welfare_from_alpha(eq.alpha_normalized),
           "iterations": eq.meta["iterations"], "residual": eq.meta["residual"]}
    if structure is SignalStructure.OWN_ORDER:
        closed = _solve(params, thetas, theta_form)
        a, b = eq.fields(), closed.fields()
        doc["sextic"] = _eq_doc(closed)
        doc["max_relative_gap"] = max(abs(a[k] - b[k]) / max(abs(b[k]), 1e-300) for k in a)
    if args.multi_start:
        starts = multi_start(params, structure, args.multi_start, args.seed, config)
        doc["multi_start_max_relative_gap"] = max(
            abs(s.fields()[k] - eq.fields()[k]) / max(abs(eq.fields()[k]), 1e-300)
            for s in starts for k in ("alpha", "beta", "lambda_1", "mu_1", "mu_2"))
    out.write(to_json(doc) + "\n")


def cmd_partial(args, out):
    params, thetas, _ = resolve_params(args, theta1_default=0.0)
    alpha, profit_hft = partial_equilibrium_no_fast_noise(args.beta, thetas.theta_z, params)
    doc = {"beta": args.beta, "thetaz": thetas.theta_z,
           "sigma_v": params.sigma_v, "sigma_2": params.sigma_2,
           "alpha": alpha, "alpha_normalized": alpha * params.sigma_v / params.sigma_2,
           "profit_hft": profit_hft, "profit_it": 0.5 * params.sigma_v ** 2 * alpha}
    if args.beta > 0 and thetas.theta_z > 0:
        oracle = solve_partial_fixed_point(params, args.beta)
        doc["fixed_point"] = {"alpha": oracle.alpha, "profit_hft": oracle.profit_hft,
                              "iterations": oracle.meta["iterations"]}
    out.write(to_json(doc) + "\n")


def cmd_limits(args, out):
    thetaz = args.thetaz if args.thetaz is not None else 0.0
    if not (math.isfinite(thetaz) and thetaz >= 0):
        raise ParameterError("thetaz must be finite and >= 0")
    params = ModelParams(sigma_v=args.sigma_v, sigma_1=0.0, sigma_2=args.sigma_2, sigma_z=0.0)
    ratio = params.sigma_v / params.sigma_2
    a_inf = limit_alpha_theta1_infinity(thetaz, params)
    doc = {
        "thetaz": thetaz, "sigma_v": params.sigma_v, "sigma_2": params.sigma_2,
        "theta1_to_infinity": {"beta": limit_beta_theta1_infinity(thetaz), "alpha": a_inf,
                               "alpha_normalized": a_inf * ratio},
        "theta1_to_zero": None,
        "thetaz_to_infinity": limit_theta_z_infinity(params),
    }
    if thetaz > 0:
        a0 = limit_alpha_theta1_zero(thetaz, params)
        doc["theta1_to_zero"] = {"beta": 0.0, "alpha": a0, "alpha_normalized": a0 * ratio}
    out.write(to_json(doc) + "\n")


# --- parser -----------------------------------------------------------------

def build_parser():
    common = _Parser(add_help=False)
    common.add_argument("--out", default=None, help="write output to FILE instead of stdout")
    common.add_argument("--config", default=None, help=f"key=value file (also ${CONFIG_ENV})")

    parser = _Parser(prog="hftkyle", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("solve", parents=[common], help="closed-form equilibrium at one point")
    _add_param_args(p)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("sweep", parents=[common], help="comparative statics along one theta")
    p.add_argument("--axis", choices=["theta1", "thetaz"], required=True)
    p.add_argument("--from", dest="start", type=float, required=True)
    p.add_argument("--to", dest="stop", type=float, required=True)
    p.add_argument("--points", type=int, default=100)
    p.add_argument("--scale", choices=["linear", "log"], default="linear")
    p.add_argument("--held", type=float, required=True, help="value of the other theta")
    p.add_argument("--sigma-v", type=float, default=1.0)
    p.add_argument("--sigma-2", type=float, default=1.0)
    p.add_argument("--baseline", action="store_true", help="append no-HFT reference columns")
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("classify", parents=[common], help="IT welfare over a theta grid")
    p.add_argument("--theta1-range", type=float, nargs=3, metavar=("FROM", "TO", "N"),
                   default=[0.01, 0.5, 50])
    p.add_argument("--thetaz-range", type=float, nargs=3, metavar=("FROM", "TO", "N"),
                   default=[0.0, 5.0, 50])
    p.add_argument("--theta1-scale", choices=["linear", "log"], default="linear")
    p.add_argument("--thetaz-scale", choices=["linear", "log"], default="linear")
    p.add_argument("--tol", type=float, default=1e-9)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("simulate", parents=[common], help="Monte Carlo check of the analytic values")
    _add_param_args(p)
    p.add_argument("--signal", choices=["own", "aggregate"], default="own")
    p.add_argument("--paths", type=int, default=1_000_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--antithetic", action="store_true")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--no-hft", action="store_true", help="beta = 0, classic single-auction pricing")
    p.add_argument("--partial-beta", type=float, default=None,
                   help="exogenous beta with theta1 = 0")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("fixed-point", parents=[common], help="best-response iteration")
    _add_param_args(p)
    p.add_argument("--signal", choices=["own", "aggregate"], default="own")
    p.add_argument("--damping", type=float, default=0.5)
    p.add_argument("--tol", type=float, default=1e-10)
    p.add_argument("--max-iter", type=int, default=10_000)
    p.add_argument("--multi-start", type=int, default=0, help="also solve from N random starts")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_fixed_point)

    p = sub.add_parser("partial-equilibrium", parents=[common],
                       help="theta1 = 0 with an exogenous HFT intensity")
    _add_param_args(p)
    p.add_argument("--beta", type=float, required=True)
    p.set_defaults(func=cmd_partial)

    p = sub.add_parser("limits", parents=[common], help="limiting values in theta1 and thetaz")
    p.add_argument("--thetaz", type=float, default=None)
    p.add_argument("--sigma-v", type=float, default=1.0)
    p.add_argument("--sigma-2", type=float, default=1.0)
    p.set_defaults(func=cmd_limits)
    return parser


def read_config(path) -> dict:
    values = {}
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ParameterError(f"{path}:{lineno}: expected key=value")
            key, value = (s.strip() for s in line.split("=", 1))
            values[key.lstrip("-").replace("-", "_")] = value
    return values


def _apply_config(parser, argv):
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("command", nargs="?")
    pre.add_argument("--config", default=None)
    known, _ = pre.parse_known_args(argv)
    path = known.config or os.environ.get(CONFIG_ENV)
    if not path or not known.command:
        return
    values = read_config(path)
    subparsers = next(a for a in parser._actions if isinstance(a, argparse._SubParsersAction))
    sub = subparsers.choices.get(known.command)
    if sub is None:
        return
    actions = {a.dest: a for a in sub._actions}
    for a in sub._actions:
        for opt in a.option_strings:
            actions.setdefault(opt.lstrip("-").replace("-", "_"), a)
    defaults = {}
    for key, value in values.items():
        action = actions.get(key)
        if action is None:
            continue  # keys for other subcommands
        key = action.dest
        if isinstance(action, argparse._StoreTrueAction):
            defaults[key] = value.lower() in ("1", "true", "yes", "on")
        elif action.nargs not in (None, "?"):
            defaults[key] = [action.type(v) if action.type else v for v in value.split()]
        else:
            defaults[key] = action.type(value) if action.type else value
        # config-supplied values satisfy required options
        action.required = False
    sub.set_defaults(**defaults)


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        _apply_config(parser, argv)
        args = parser.parse_args(argv)
        buf = io.StringIO()
        args.func(args, buf)
        if args.out:
            with open(args.out, "w") as fh:
                fh.write(buf.getvalue())
        else:
            sys.stdout.write(buf.getvalue())
        return EXIT_OK
    except CliError as exc:
        code, payload = exc.code, {"error": exc.kind, "message": str(exc), **exc.extra}
    except HftKyleError as exc:
        code, payload = _exit_code(exc), {"error": type(exc).__name__, "message": str(exc),
                                          **_error_payload(exc)}
    except (OSError, ValueError) as exc:
        code, payload = EXIT_VALIDATION, {"error": type(exc).__name__, "message": str(exc)}
    payload["exit_code"] = code
    sys.stderr.write(to_json(payload) + "\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
