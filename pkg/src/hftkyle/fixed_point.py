"""Best-response iteration to the linear equilibrium.

This solver never touches the degree-6 polynomial, so it doubles as an
independent check of the closed forms and is the only solver for the
aggregate-signal model.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import NoConvergence, NonConcaveObjective, ParameterError, ThetaOutOfDomain
from .model import (
    Equilibrium,
    LinearStrategies,
    ModelParams,
    PricingCoefficients,
    SignalStructure,
    dealer_pricing,
    hft_expected_profit_from,
    innovation_impact,
    it_expected_profit,
    thetas_from_params,
)


@dataclass(frozen=True)
class FixedPointConfig:
    damping: float = 0.5
    tol: float = 1e-10
    max_iter: int = 10_000
    init: LinearStrategies | None = field(default=None)  # None: alpha = sigma_2/sigma_v, beta = 0.25

    def __post_init__(self):
        if not 0 < self.damping <= 1:
            raise ParameterError(f"damping must lie in (0, 1], got {self.damping!r}")
        if not self.tol > 0:
            raise ParameterError(f"tol must be > 0, got {self.tol!r}")
        if self.max_iter < 1:
            raise ParameterError(f"max_iter must be positive, got {self.max_iter!r}")


def best_response_it(beta: float, pricing: PricingCoefficients) -> float:
    # E[p2 | v, i] = (mu_1 beta + mu_2 (1 - beta)) i under x = beta * signal
    k = pricing.mu_1 * beta + pricing.mu_2 * (1.0 - beta)
    if not k > 0:
        raise NonConcaveObjective(f"IT objective not concave: effective impact {k!r} <= 0")
    return 1.0 / (2.0 * k)


def projection_weight(alpha: float, params: ModelParams, structure: SignalStructure) -> float:
    """Weight rho in E[target | signal] = rho * signal."""
    var_i = (alpha * params.sigma_v) ** 2
    szsq = params.sigma_z ** 2
    if structure is SignalStructure.OWN_ORDER:
        return var_i / (var_i + szsq)
    s2sq = params.sigma_2 ** 2
    return (var_i + s2sq) / (var_i + s2sq + szsq)


def best_response_hft(alpha: float, pricing: PricingCoefficients,
                      structure: SignalStructure, params: ModelParams) -> float:
    curvature = pricing.mu_2 + pricing.lambda_1 - pricing.mu_1
    if not curvature > 0:
        raise NonConcaveObjective(f"HFT objective not concave: mu_2 + lambda_1 - mu_1 = {curvature!r}")
    rho = projection_weight(alpha, params, structure)
    return pricing.mu_2 * rho / (2.0 * curvature)


def _rel_change(new, old):
    return max(abs(a - b) / max(abs(a), 1e-300) for a, b in zip(new, old))


def _state(alpha, beta, pricing):
    return (alpha, beta, pricing.lambda_1, pricing.mu_1, pricing.mu_2)


def solve_fixed_point(params: ModelParams,
                      structure: SignalStructure = SignalStructure.OWN_ORDER,
                      config: FixedPointConfig | None = None) -> Equilibrium:
    config = config or FixedPointConfig()
    if not thetas_from_params(params).theta_1 > 0:
        raise ThetaOutOfDomain(
            "theta1 must be > 0: without fast noise the HFT intensity has no equilibrium; "
            "use solve_partial_fixed_point with an exogenous beta")
    init = config.init or LinearStrategies(alpha=params.sigma_2 / params.sigma_v, beta=0.25)
    alpha, beta = init.alpha, init.beta
    d = config.damping
    pricing = dealer_pricing(LinearStrategies(alpha, beta), params, structure)
    state = _state(alpha, beta, pricing)
    tail = []
    change = math.inf
    for it in range(1, config.max_iter + 1):
        a_br = best_response_it(beta, pricing)
        b_br = best_response_hft(alpha, pricing, structure, params)
        alpha = (1 - d) * alpha + d * a_br
        beta = (1 - d) * beta + d * b_br
        pricing = dealer_pricing(LinearStrategies(alpha, beta), params, structure)
        new_state = _state(alpha, beta, pricing)
        change = _rel_change(new_state, state)
        state = new_state
        tail.append(state)
        del tail[:-10]
        if change <= config.tol:
            return _package(alpha, beta, pricing, params, structure,
                            {"method": "fixed-point", "iterations": it, "residual": change})
    raise NoConvergence(
        f"no convergence after {config.max_iter} iterations (last relative change {change!r})",
        trajectory_tail=tail)


def solve_partial_fixed_point(params: ModelParams, beta: float,
                              config: FixedPointConfig | None = None) -> Equilibrium:
    """IT/dealer fixed point with the HFT intensity held at an exogenous beta."""
    config = config or FixedPointConfig()
    alpha = (config.init.alpha if config.init else params.sigma_2 / params.sigma_v)
    structure = SignalStructure.OWN_ORDER
    pricing = dealer_pricing(LinearStrategies(alpha, beta), params, structure)
    state = _state(alpha, beta, pricing)
    change = math.inf
    tail = []
    for it in range(1, config.max_iter + 1):
        alpha = (1 - config.damping) * alpha + config.damping * best_response_it(beta, pricing)
        pricing = dealer_pricing(LinearStrategies(alpha, beta), params, structure)
        new_state = _state(alpha, beta, pricing)
        change = _rel_change(new_state, state)
        state = new_state
        tail.append(state)
        del tail[:-10]
        if change <= config.tol:
            return _package(alpha, beta, pricing, params, structure,
                            {"method": "partial-fixed-point", "iterations": it, "residual": change})
    raise NoConvergence(f"no convergence after {config.max_iter} iterations", trajectory_tail=tail)


def _package(alpha, beta, pricing, params, structure, meta):
    strategies = LinearStrategies(alpha=alpha, beta=beta)
    return Equilibrium(
        strategies=strategies,
        pricing=pricing,
        lambda_2=innovation_impact(strategies, params, structure),
        profit_it=it_expected_profit(strategies, pricing, params, structure),
        profit_hft=hft_expected_profit_from(strategies, pricing, params, structure),
        params=params,
        structure=structure,
        meta=meta,
    )


def random_inits(params: ModelParams, n: int, seed: int = 0) -> list[LinearStrategies]:
    """Uniform starts: alpha in [0.1, 3] sigma_2/sigma_v, beta in [0.01, 0.9]."""
    rng = np.random.default_rng(seed)
    ratio = params.sigma_2 / params.sigma_v
    return [LinearStrategies(alpha=float(rng.uniform(0.1, 3.0)) * ratio,
                             beta=float(rng.uniform(0.01, 0.9))) for _ in range(n)]


def multi_start(params: ModelParams, structure: SignalStructure = SignalStructure.OWN_ORDER,
                n_starts: int = 10, seed: int = 0,
                config: FixedPointConfig | None = None) -> list[Equilibrium]:
    config = config or FixedPointConfig()
    return [
        solve_fixed_point(params, structure, FixedPointConfig(
            damping=config.damping, tol=config.tol, max_iter=config.max_iter, init=init))
        for init in random_inits(params, n_starts, seed)
    ]
