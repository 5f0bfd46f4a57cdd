"""Seeded Monte Carlo play of the two-period game.

Paths are split into fixed-size chunks; chunk ``k`` draws from its own
``SeedSequence(seed, spawn_key=(k,))`` stream and the per-chunk sums are
combined with exactly rounded summation, so results are bit-identical for any
number of worker threads.
"""
from __future__ import annotations

import enum
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from . import kernels
from .errors import DegenerateRegressor, ParameterError
from .model import (
    LinearStrategies,
    ModelParams,
    PricingCoefficients,
    SignalStructure,
    hft_expected_profit_from,
    it_expected_profit,
)

MIN_PATHS = 10_000


@dataclass(frozen=True)
class SimulationConfig:
    n_paths: int = 1_000_000
    seed: int = 0
    # Off by default: both profits and all regression moments are even functions
    # of (v, z, u1, u2), so a mirrored path duplicates its partner exactly.
    antithetic: bool = False
    chunk_size: int = 1 << 16
    workers: int = 1

    def __post_init__(self):
        if self.n_paths < MIN_PATHS:
            raise ParameterError(f"n_paths must be >= {MIN_PATHS} for regression output, got {self.n_paths}")
        if self.antithetic and self.n_paths % 2:
            raise ParameterError("antithetic sampling needs an even n_paths")
        if not 0 <= self.seed < 2 ** 64:
            raise ParameterError("seed must be a 64-bit unsigned integer")
        if self.chunk_size < 1 or self.workers < 1:
            raise ParameterError("chunk_size and workers must be positive")


class Estimate(NamedTuple):
    value: float
    se: float

    def z_score(self, target: float) -> float:
        if self.se == 0:
            return 0.0 if self.value == target else math.copysign(math.inf, self.value - target)
        return (self.value - target) / self.se


@dataclass(frozen=True)
class SimulationResult:
    est_profit_it: Estimate
    est_profit_hft: Estimate
    lambda_1: Estimate
    mu_1: Estimate
    mu_2: Estimate
    n_paths: int
    seed: int
    antithetic: bool
    backend: str
    # X'(v - X b) / ||X'v|| for the two-regressor fit; least-squares sanity gate
    normal_equation_residual: float = 0.0


def _draw(params, seed, chunk, m):
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(chunk,))))
    w = rng.standard_normal((4, m))
    return (params.sigma_v * w[0], params.sigma_z * w[1],
            params.sigma_1 * w[2], params.sigma_2 * w[3])


def simulate_paths(params: ModelParams, strategies: LinearStrategies, pricing: PricingCoefficients,
                   structure: SignalStructure, n: int, seed: int = 0) -> dict:
    """Per-path arrays for one stream; meant for small-sample inspection."""
    v, z, u1, u2 = _draw(params, seed, 0, n)
    i = strategies.alpha * v
    signal = i + z + (u2 if structure is SignalStructure.AGGREGATE_ORDER else 0.0)
    x = strategies.beta * signal
    y1 = x + u1
    y2 = i + u2 - x
    p1 = pricing.lambda_1 * y1
    p2 = pricing.mu_1 * y1 + pricing.mu_2 * y2
    return {"v": v, "z": z, "u1": u1, "u2": u2, "i": i, "signal": signal, "x": x,
            "y1": y1, "y2": y2, "p1": p1, "p2": p2,
            "pi_it": (v - p2) * i, "pi_hft": (p2 - p1) * x}


def _moments(params, strategies, pricing, structure, config):
    n_draws = config.n_paths // 2 if config.antithetic else config.n_paths
    n_chunks = -(-n_draws // config.chunk_size)
    aggregate = structure is SignalStructure.AGGREGATE_ORDER

    def chunk_sums(k):
        m = min(config.chunk_size, n_draws - k * config.chunk_size)
        v, z, u1, u2 = _draw(params, config.seed, k, m)
        return kernels.accumulate_paths(
            v, z, u1, u2, strategies.alpha, strategies.beta,
            pricing.lambda_1, pricing.mu_1, pricing.mu_2, aggregate)

    if config.workers > 1:
        with ThreadPoolExecutor(config.workers) as pool:
            rows = list(pool.map(chunk_sums, range(n_chunks)))
    else:
        rows = [chunk_sums(k) for k in range(n_chunks)]
    return dict(zip(kernels.SUM_NAMES, kernels.fsum_rows(rows))), n_draws


def _mean_se(total, total_sq, n):
    mean = total / n
    var = max(total_sq - n * mean * mean, 0.0) / (n - 1)
    return Estimate(mean, math.sqrt(var / n))


def simulate_game(params: ModelParams, strategies: LinearStrategies, pricing: PricingCoefficients,
                  structure: SignalStructure = SignalStructure.OWN_ORDER,
                  config: SimulationConfig | None = None) -> SimulationResult:
    """Play the game with the given (not necessarily efficient) prices.

    Profits are sample means with standard errors from the per-path variance.
    The pricing coefficients are re-estimated by regressing v on y1 and on
    (y1, y2) through the origin, which tests weak efficiency rather than assuming it.
    With antithetic sampling, standard errors use the number of distinct draws.
    """
    config = config or SimulationConfig()
    s, n = _moments(params, strategies, pricing, structure, config)

    profit_it = _mean_se(s["pi_it"], s["pi_it_sq"], n)
    profit_hft = _mean_se(s["pi_hft"], s["pi_hft_sq"], n)

    s11, s12, s22 = s["y1y1"], s["y1y2"], s["y2y2"]
    c1, c2, svv = s["vy1"], s["vy2"], s["vv"]
    if not s11 > 0:
        raise DegenerateRegressor("sample Var(y1) is zero")
    det = s11 * s22 - s12 * s12
    if not det > 1e-12 * s11 * s22:
        raise DegenerateRegressor("sample Gram matrix of (y1, y2) is singular")

    lam = c1 / s11
    s2_one = max(svv - lam * c1, 0.0) / (n - 1)
    lambda_1 = Estimate(lam, math.sqrt(s2_one / s11))

    m1 = (s22 * c1 - s12 * c2) / det
    m2 = (s11 * c2 - s12 * c1) / det
    s2_two = max(svv - m1 * c1 - m2 * c2, 0.0) / (n - 2)
    mu_1 = Estimate(m1, math.sqrt(s2_two * s22 / det))
    mu_2 = Estimate(m2, math.sqrt(s2_two * s11 / det))
    ne = math.hypot(c1 - s11 * m1 - s12 * m2, c2 - s12 * m1 - s22 * m2) / math.hypot(c1, c2)

    return SimulationResult(
        est_profit_it=profit_it, est_profit_hft=profit_hft,
        lambda_1=lambda_1, mu_1=mu_1, mu_2=mu_2,
        n_paths=config.n_paths, seed=config.seed, antithetic=config.antithetic,
        backend=kernels.BACKEND, normal_equation_residual=ne,
    )


class ScanAxis(enum.Enum):
    IT_ALPHA = "it-alpha"
    HFT_BETA = "hft-beta"


def profit_scan(params: ModelParams, pricing: PricingCoefficients, structure: SignalStructure,
                scan_axis: ScanAxis, fixed_other: float, grid) -> list[tuple[float, float]]:
    """Analytic expected profit of one deviating agent along a grid.

    The opponent's intensity (``fixed_other``) and the dealers' pricing stay put.
    """
    grid = [float(g) for g in grid]
    if not grid:
        raise ParameterError("scan grid is empty")
    out = []
    for value in grid:
        if not math.isfinite(value):
            raise ParameterError(f"non-finite grid value {value!r}")
        if scan_axis is ScanAxis.IT_ALPHA:
            st = LinearStrategies(alpha=value, beta=fixed_other)
            out.append((value, it_expected_profit(st, pricing, params, structure)))
        else:
            st = LinearStrategies(alpha=fixed_other, beta=value)
            out.append((value, hft_expected_profit_from(st, pricing, params, structure)))
    return out
