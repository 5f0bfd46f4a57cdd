"""Acceptance gate: one test per criterion, each recording a PASS/FAIL line.

The lines are printed as they are produced (visible with ``-s``) and again as a
block in the terminal summary.
"""
import contextlib
import csv
import io
import math
import time

import numpy as np
import pytest

from hftkyle.cli import main as cli_main
from hftkyle.equilibrium import (
    WelfareClass,
    equilibrium_from_thetas,
    limit_alpha_theta1_zero,
    partial_equilibrium_no_fast_noise,
    theta_z_bar,
    theta_z_tilde,
    welfare_by_region,
)
from hftkyle.fixed_point import FixedPointConfig, multi_start, solve_fixed_point
from hftkyle.model import (
    LinearStrategies, ModelParams, PricingCoefficients, SignalStructure, ThetaPair, dealer_pricing,
)
from hftkyle.sextic import build_beta_polynomial, limit_beta_theta1_infinity, solve_beta, sturm_count
from hftkyle.simulator import ScanAxis, SimulationConfig, profit_scan, simulate_game

RESULTS = []

OWN, AGG = SignalStructure.OWN_ORDER, SignalStructure.AGGREGATE_ORDER
T1_GRID = np.logspace(-3, 3, 30)
TZ_GRID = np.concatenate([[0.0], np.logspace(-3, 3, 29)])


def record(number, title, failures, detail=""):
    ok = not failures
    line = f"criterion {number:>2} {'PASS' if ok else 'FAIL'}  {title}"
    if detail:
        line += f"  [{detail}]"
    if failures:
        line += "  first failures: " + "; ".join(failures[:3])
    RESULTS.append(line)
    print(line)
    assert ok, line


@pytest.fixture(scope="module")
def grid_solutions():
    start = time.perf_counter()
    sols = [[equilibrium_from_thetas(ThetaPair(float(a), float(b))) for b in TZ_GRID] for a in T1_GRID]
    return sols, time.perf_counter() - start


def _cli_csv(*argv):
    buf = io.StringIO()
    with contextlib.redirect_stdout(buf):
        code = cli_main(list(argv))
    assert code == 0
    rows = list(csv.reader(io.StringIO(buf.getvalue())))
    header = rows[0]
    return {name: [r[k] for r in rows[1:]] for k, name in enumerate(header)}


def _floats(values):
    return np.array([float(v) for v in values])


def test_criterion_01_corollary_bounds(grid_solutions):
    sols, elapsed = grid_solutions
    failures = []
    for row in sols:
        for eq in row:
            t = eq.params.thetas
            if eq.beta > 0.5 + 1e-9:
                failures.append(f"beta={eq.beta!r} at {t}")
            if eq.alpha_normalized > 2 + 1e-9:
                failures.append(f"alpha_norm={eq.alpha_normalized!r} at {t}")
    far = equilibrium_from_thetas(ThetaPair(1e9, 0.0))
    if abs(far.beta - 0.5) > 1e-4 or abs(far.alpha_normalized - 2) > 1e-4:
        failures.append(f"theta1=1e9: beta={far.beta!r}, alpha_norm={far.alpha_normalized!r}")
    if elapsed >= 5:
        failures.append(f"grid took {elapsed:.2f}s")
    record(1, "beta <= 1/2 and alpha_norm <= 2 on 30x30 grid; limit point", failures,
           f"max beta={max(e.beta for r in sols for e in r):.12f}, "
           f"max alpha_norm={max(e.alpha_normalized for r in sols for e in r):.12f}, {elapsed:.3f}s")


def test_criterion_02_root_uniqueness(grid_solutions):
    sols, _ = grid_solutions
    failures = []
    worst = 0.0
    for row in sols:
        for eq in row:
            t = eq.params.thetas
            poly = build_beta_polynomial(t)
            count = sturm_count(poly.coefficients)
            if count != 1:
                failures.append(f"{count} roots at {t}")
            ratio = abs(poly(eq.beta)) / sum(abs(c) for c in poly.coefficients)
            worst = max(worst, ratio)
            if ratio > 1e-10:
                failures.append(f"residual ratio {ratio:.3g} at {t}")
    record(2, "exactly one root in (0,1) (exact Sturm count); small residual", failures,
           f"worst |P|/sum|c|={worst:.3g}")


def test_criterion_03_beta_monotone(grid_solutions):
    sols, _ = grid_solutions
    beta = np.array([[eq.beta for eq in row] for row in sols])
    failures = []
    d1 = np.diff(beta, axis=0)
    dz = np.diff(beta, axis=1)
    if d1.min() < -1e-10:
        failures.append(f"beta drops by {-d1.min():.3g} along theta1")
    if dz.max() > 1e-10:
        failures.append(f"beta rises by {dz.max():.3g} along thetaz")
    record(3, "beta nondecreasing in theta1, nonincreasing in thetaz", failures)


def test_criterion_04_alpha_shapes(grid_solutions):
    sols, _ = grid_solutions
    alpha = np.array([[eq.alpha for eq in row] for row in sols])
    failures = []
    if np.diff(alpha, axis=0).min() < -1e-10:
        failures.append(f"alpha drops along theta1 by {-np.diff(alpha, axis=0).min():.3g}")
    tz_fine = np.linspace(0.0, 25.0, 500)
    step = tz_fine[1] - tz_fine[0]
    for t1 in (0.6, 1.0, 5.0):
        a = np.array([equilibrium_from_thetas(ThetaPair(t1, float(z))).alpha for z in tz_fine])
        if np.diff(a).max() > 1e-10:
            failures.append(f"alpha rises in thetaz at theta1={t1}")
    offsets = []
    for t1 in (0.12, 0.2, 0.4):
        a = np.array([equilibrium_from_thetas(ThetaPair(t1, float(z))).alpha for z in tz_fine])
        off = abs(tz_fine[int(np.argmax(a))] - theta_z_tilde(t1)) / step
        offsets.append(off)
        if off > 2:
            failures.append(f"argmax {off:.2f} steps from peak at theta1={t1}")
    record(4, "alpha monotone in theta1; decreasing in thetaz for large theta1; hump peak", failures,
           "argmax offsets (steps): " + ", ".join(f"{o:.2f}" for o in offsets))


def test_criterion_05_welfare_regions():
    t1s = [0.01 * k for k in range(1, 51)]
    tzs = [float(z) for z in np.linspace(0.0, 5.0, 50)]
    failures = []
    checked = 0
    for t1 in t1s:
        for tz in tzs:
            t = ThetaPair(t1, tz)
            a = equilibrium_from_thetas(t).alpha_normalized
            if abs(a - 1) <= 1e-6:
                continue
            checked += 1
            by_sign = WelfareClass.BENEFITED if a > 1 else WelfareClass.HARMED
            if welfare_by_region(t) is not by_sign:
                failures.append(f"{t}: region {welfare_by_region(t).value}, alpha_norm {a!r}")
    a = [equilibrium_from_thetas(ThetaPair(0.1, tz)).alpha_normalized for tz in tzs]
    k = next((i for i, v in enumerate(a) if v > 1), None)
    bar = theta_z_bar(0.1)
    step = tzs[1] - tzs[0]
    if k is None or k == 0 or not (tzs[k - 1] - step <= bar <= tzs[k] + step):
        failures.append(f"sign change index {k} does not bracket theta_z_bar={bar!r}")
    record(5, "region formula matches sign(alpha_norm - 1); crossing brackets theta_z_bar(0.1)",
           failures, f"{checked} points checked, theta_z_bar(0.1)={bar:.6f} in "
           f"[{tzs[k - 1]:.4f}, {tzs[k]:.4f}]" if k else "")


def test_criterion_06_limits():
    failures = []
    gaps = []
    for tz in (0.0, 0.04, 1.0, 25.0):
        lim = limit_beta_theta1_infinity(tz)
        big = solve_beta(ThetaPair(1e8, tz))
        gaps.append(abs(lim - big))
        if abs(lim - big) > 1e-4:
            failures.append(f"thetaz={tz}: limit {lim!r} vs {big!r}")
    if limit_beta_theta1_infinity(0.0) != 0.5:
        failures.append(f"thetaz=0 limit is {limit_beta_theta1_infinity(0.0)!r}")
    p = ModelParams(1.0, 0.0, 1.0, 0.0)
    rel = []
    for tz in (0.1, 1.0, 10.0):
        a = equilibrium_from_thetas(ThetaPair(1e-6, tz)).alpha
        f = limit_alpha_theta1_zero(tz, p)
        rel.append(abs(a - f) / f)
        if abs(a - f) > 0.02 * f or not a < 1:
            failures.append(f"thetaz={tz}: alpha {a!r} vs formula {f!r}")
    record(6, "large- and small-theta1 limits", failures,
           f"max beta gap {max(gaps):.2g}, small-theta1 rel errors "
           + ", ".join(f"{r:.2%}" for r in rel))


def test_criterion_07_large_signal_noise():
    eq = equilibrium_from_thetas(ThetaPair(1.0, 1e6))
    checks = {
        "beta": eq.beta < 1e-3,
        "alpha_norm": abs(eq.alpha_normalized - 1) < 1e-3,
        "lambda1": eq.pricing.lambda_1 < 1e-3,
        "mu1": eq.pricing.mu_1 < 1e-3,
        "mu2": abs(eq.pricing.mu_2 - 0.5) < 1e-3,
        "profit_hft_norm": eq.profit_hft_normalized < 1e-3,
        "lambda2": abs(eq.lambda_2 - 0.5) < 1e-3,
    }
    record(7, "thetaz -> infinity recovers the single-auction benchmark",
           [k for k, ok in checks.items() if not ok],
           f"beta={eq.beta:.3g}, alpha_norm-1={eq.alpha_normalized - 1:.3g}")


def test_criterion_08_fixed_point_agreement():
    failures = []
    worst, iters = 0.0, 0
    config = FixedPointConfig(damping=0.5)
    for t1 in np.logspace(-2, 2, 10):
        for tz in np.concatenate([[0.0], np.logspace(-2, 2, 9)]):
            p = ModelParams.from_thetas(float(t1), float(tz))
            fp = solve_fixed_point(p, OWN, config)
            cf = equilibrium_from_thetas(ThetaPair(float(t1), float(tz)))
            a, b = fp.fields(), cf.fields()
            gap = max(abs(a[k] - b[k]) / abs(b[k]) for k in a)
            worst = max(worst, gap)
            iters = max(iters, fp.meta["iterations"])
            if gap > 1e-8 or fp.meta["iterations"] >= 5000:
                failures.append(f"({t1:.3g}, {tz:.3g}): gap {gap:.3g}, {fp.meta['iterations']} iterations")
    record(8, "own-signal fixed point equals closed form on 10x10 grid", failures,
           f"worst relative gap {worst:.2g}, max iterations {iters}")


def test_criterion_09_aggregate_signal():
    # thetaz = 0 makes the aggregate signal exactly neutral (alpha_norm = 1); see test_fixed_point
    failures = []
    worst = 0.0
    lowest = math.inf
    for t1 in (0.05, 0.1, 0.2, 0.5, 1.0, 5.0):
        for tz in (0.01, 0.04, 0.25, 1.0, 5.0, 25.0):
            p = ModelParams.from_thetas(t1, tz)
            sols = multi_start(p, AGG, n_starts=10, seed=0)
            ref = sols[0]
            lowest = min(lowest, ref.alpha_normalized)
            if not (0 < ref.beta < 1 and ref.alpha_normalized > 1):
                failures.append(f"({t1}, {tz}): beta {ref.beta!r}, alpha_norm {ref.alpha_normalized!r}")
            for s in sols[1:]:
                gap = max(abs(s.fields()[k] - ref.fields()[k]) / abs(ref.fields()[k]) for k in ref.fields())
                worst = max(worst, gap)
            if worst > 1e-7:
                failures.append(f"({t1}, {tz}): multi-start gap {worst:.3g}")
    record(9, "aggregate-signal fixed point: beta in (0,1), alpha_norm > 1, multi-start agree", failures,
           f"min alpha_norm {lowest:.6f}, multi-start gap {worst:.2g}")


def test_criterion_10_monte_carlo():
    failures = []
    p = ModelParams.from_thetas(1.0, 0.04)
    eq = equilibrium_from_thetas(ThetaPair(1.0, 0.04))
    start = time.perf_counter()
    r = simulate_game(p, eq.strategies, eq.pricing, OWN, SimulationConfig(n_paths=1_000_000, seed=42))
    zs = {
        "profit_it": r.est_profit_it.z_score(eq.profit_it),
        "profit_hft": r.est_profit_hft.z_score(eq.profit_hft),
        "lambda1": r.lambda_1.z_score(eq.pricing.lambda_1),
        "mu1": r.mu_1.z_score(eq.pricing.mu_1),
        "mu2": r.mu_2.z_score(eq.pricing.mu_2),
    }
    classic = simulate_game(p, LinearStrategies(1.0, 0.0), PricingCoefficients(0.0, 0.0, 0.5), OWN,
                            SimulationConfig(n_paths=1_000_000, seed=42))
    zs["no_hft_profit_it"] = classic.est_profit_it.z_score(0.5)
    elapsed = time.perf_counter() - start
    failures = [f"{k}: z={z:.2f}" for k, z in zs.items() if abs(z) > 4]
    if elapsed >= 30:
        failures.append(f"runtime {elapsed:.1f}s")
    record(10, "Monte Carlo within 4 SE of analytic values", failures,
           ", ".join(f"{k} z={z:+.2f}" for k, z in zs.items()) + f", {elapsed:.2f}s")


def test_criterion_11_best_response_scans():
    failures = []
    for t1, tz in ((1.0, 0.04), (0.1, 0.5), (5.0, 5.0)):
        p = ModelParams.from_thetas(t1, tz)
        eq = equilibrium_from_thetas(ThetaPair(t1, tz))
        betas = np.linspace(0.0, 1.0, 203)[1:-1]
        rows = profit_scan(p, eq.pricing, OWN, ScanAxis.HFT_BETA, eq.alpha, betas)
        best = max(rows, key=lambda r: r[1])[0]
        if abs(best - eq.beta) > betas[1] - betas[0]:
            failures.append(f"({t1}, {tz}) beta scan peak {best!r} vs {eq.beta!r}")
        alphas = np.linspace(0.0, 2 * eq.alpha, 203)[1:-1]
        rows = profit_scan(p, eq.pricing, OWN, ScanAxis.IT_ALPHA, eq.beta, alphas)
        best = max(rows, key=lambda r: r[1])[0]
        if abs(best - eq.alpha) > alphas[1] - alphas[0]:
            failures.append(f"({t1}, {tz}) alpha scan peak {best!r} vs {eq.alpha!r}")
    record(11, "201-point profit scans peak at the solved intensities", failures)


def test_criterion_12_partial_equilibrium():
    p = ModelParams(1.0, 0.0, 1.0, 1.0)
    alpha, _ = partial_equilibrium_no_fast_noise(0.3, 1.0, p)
    failures = []
    if alpha != math.sqrt(0.5):
        failures.append(f"alpha={alpha!r}")
    st = LinearStrategies(alpha, 0.3)
    r = simulate_game(p, st, dealer_pricing(st, p, OWN), OWN, SimulationConfig(n_paths=1_000_000, seed=42))
    z = r.est_profit_hft.z_score(0.0)
    if abs(z) > 4:
        failures.append(f"HFT profit z={z:.2f}")
    record(12, "no fast noise: alpha = sqrt(1/2), HFT profit zero", failures, f"HFT profit z={z:+.2f}")


def test_criterion_13_figure_shapes():
    failures = []
    along_t1 = _cli_csv("sweep", "--axis", "theta1", "--from", "0.01", "--to", "25", "--points", "200",
                    "--scale", "log", "--held", "0.04", "--baseline")
    for name in ("beta", "profit_hft_norm"):
        if np.diff(_floats(along_t1[name])).min() <= 0:
            failures.append(f"{name} not increasing in theta1")

    crossing_t1 = _cli_csv("sweep", "--axis", "theta1", "--from", "0.01", "--to", "1", "--points", "100",
                    "--held", "0", "--baseline")
    t1 = _floats(crossing_t1["theta1"])
    gap = _floats(crossing_t1["alpha_norm"]) - _floats(crossing_t1["baseline_alpha_norm"])
    k = int(np.argmax(gap > 0))
    crossing = 0.5 * (t1[k - 1] + t1[k])
    if not (k > 0 and np.all(gap[:k] < 0) and np.all(gap[k:] > 0) and abs(crossing - 0.15) < 0.02):
        failures.append(f"baseline crossing at {crossing!r}")

    hft_tz = _cli_csv("sweep", "--axis", "thetaz", "--from", "0", "--to", "25", "--points", "500",
                    "--held", "0.12")
    ph = _floats(hft_tz["profit_hft_norm"])
    if not np.all(np.diff(ph[:5]) > 0):
        failures.append("HFT profit not rising for small thetaz at theta1=0.12")

    shapes = {}
    for held in ("0.12", "0.2", "1"):
        alpha_tz = _cli_csv("sweep", "--axis", "thetaz", "--from", "0", "--to", "25", "--points", "500",
                        "--held", held, "--baseline")
        a = _floats(alpha_tz["alpha_norm"])
        k = int(np.argmax(a))
        shapes[held] = (k, a)
        rising, falling = np.diff(a[:k + 1]), np.diff(a[k:])
        if held == "1":
            if k != 0 or falling.max() > 1e-12:
                failures.append("theta1=1: alpha not decreasing")
        elif k == 0 or k == len(a) - 1 or rising.min() < -1e-12 or falling.max() > 1e-12:
            failures.append(f"theta1={held}: alpha not single-peaked")
    if not shapes["0.12"][1][0] < 1 < shapes["0.12"][1].max():
        failures.append("theta1=0.12: alpha does not cross the baseline from below")
    if not shapes["0.2"][1].min() > 1:
        failures.append("theta1=0.2: alpha dips below baseline")
    record(13, "sweep CSVs reproduce the qualitative figure shapes", failures,
           f"theta1 baseline crossing near {crossing:.4f}")
