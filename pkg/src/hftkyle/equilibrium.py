"""Closed-form equilibrium, IT welfare classification, and limiting regimes."""
from __future__ import annotations

import enum
import math

from . import sextic
from .errors import ParameterError, ThetaOutOfDomain, WelfareMismatch
from .model import (
    Equilibrium,
    LinearStrategies,
    ModelParams,
    PricingCoefficients,
    SignalStructure,
    ThetaPair,
    hft_expected_profit_from,
    innovation_impact,
    thetas_from_params,
)

# theta_1 above which the IT gains from the HFT for every signal precision
THETA1_ALWAYS_BENEFITED = (2 * math.sqrt(3) - 3) / 3
# alpha* turns from increasing to decreasing in theta_z only below this theta_1
THETA1_ALPHA_TURNING = 0.5

# fitted constants of the theta_1 -> 0 limit, used as printed
SMALL_THETA1_X = 0.3245
SMALL_THETA1_Y = 1.3845


class WelfareClass(enum.Enum):
    BENEFITED = "benefited"
    HARMED = "harmed"
    BOUNDARY = "boundary"


def closed_form_coefficients(beta: float, thetas: ThetaPair, sigma_v=1.0, sigma_2=1.0):
    """(alpha, lambda_1, mu_1, mu_2) implied by an equilibrium beta."""
    t1, tz = thetas.theta_1, thetas.theta_z
    b = beta
    b2 = b * b
    scale = sigma_v / (2 * sigma_2)
    num = t1 + b2 * tz * (t1 + 1)  # theta_1 + beta^2 theta_z (theta_1 + 1)
    den = t1 * (1 - b) ** 2 + b2 * (tz + 1)
    root = math.sqrt(num * den)
    alpha = (sigma_2 / sigma_v) * math.sqrt(num / den)
    lambda_1 = scale * 2 * b * root / (b2 * num + (b2 * tz + t1) * den)
    mu_1 = scale * (b2 * tz + b) / root
    mu_2 = scale * (b2 * tz + (1 - b) * t1) / root
    return alpha, lambda_1, mu_1, mu_2


def equilibrium_from_thetas(thetas: ThetaPair, sigma_v: float = 1.0, sigma_2: float = 1.0,
                            tol: float = sextic.DEFAULT_TOL) -> Equilibrium:
    params = ModelParams(
        sigma_v=float(sigma_v),
        sigma_1=float(sigma_2 * math.sqrt(thetas.theta_1)),
        sigma_2=float(sigma_2),
        sigma_z=float(sigma_2 * math.sqrt(thetas.theta_z)),
    )
    return _solve(thetas, params, tol)


def solve_equilibrium(params: ModelParams, tol: float = sextic.DEFAULT_TOL) -> Equilibrium:
    """Unique linear equilibrium for theta_1 > 0 from the degree-6 root."""
    return _solve(thetas_from_params(params), params, tol)


def _solve(thetas, params, tol):
    if not thetas.theta_1 > 0:
        raise ThetaOutOfDomain(
            "theta1 must be > 0; see partial-equilibrium command")
    beta = sextic.solve_beta(thetas, tol)
    alpha, lambda_1, mu_1, mu_2 = closed_form_coefficients(
        beta, thetas, params.sigma_v, params.sigma_2)
    strategies = LinearStrategies(alpha=alpha, beta=beta)
    pricing = PricingCoefficients(lambda_1=lambda_1, mu_1=mu_1, mu_2=mu_2)
    poly = sextic.build_beta_polynomial(thetas)
    return Equilibrium(
        strategies=strategies,
        pricing=pricing,
        lambda_2=innovation_impact(strategies, params),
        profit_it=0.5 * params.sigma_v ** 2 * alpha,
        profit_hft=hft_expected_profit_from(strategies, pricing, params),
        params=params,
        structure=SignalStructure.OWN_ORDER,
        meta={
            "method": "sextic",
            "residual": poly(beta),
            "coefficient_scale": sum(abs(c) for c in poly.coefficients),
            "lambda_2_definition": "innovation representation; derived, interpretation-dependent",
        },
    )


def hft_expected_profit(eq: Equilibrium, params: ModelParams | None = None) -> float:
    params = eq.params if params is None else params
    if eq.strategies.beta == 0:
        return 0.0
    return hft_expected_profit_from(eq.strategies, eq.pricing, params, eq.structure)


def theta_z_bar(theta_1: float) -> float:
    """Signal noise above which the IT is benefited, for small theta_1."""
    if not 0 < theta_1 <= THETA1_ALWAYS_BENEFITED:
        raise ThetaOutOfDomain(
            f"theta_z_bar is defined for 0 < theta_1 <= {THETA1_ALWAYS_BENEFITED!r}, got {theta_1!r}")
    t = theta_1
    value = (-(t + 5) + 2 * math.sqrt(4 * t * t + 10 * t + 5)) / (-5 * t)
    # mathematically >= 0 on the domain; the sign at the right end is rounding
    return max(value, 0.0)


def theta_z_tilde(theta_1: float) -> float:
    """Turning point of alpha* in theta_z; the right end 1/2 is accepted and gives 0."""
    if not 0 < theta_1 <= THETA1_ALPHA_TURNING:
        raise ThetaOutOfDomain(f"theta_z_tilde is defined for 0 < theta_1 < 1/2, got {theta_1!r}")
    t = theta_1
    return (1 - t - 2 * t * t) / (3 * t)


def welfare_by_region(thetas: ThetaPair) -> WelfareClass:
    t1, tz = thetas.theta_1, thetas.theta_z
    if t1 > THETA1_ALWAYS_BENEFITED:
        return WelfareClass.BENEFITED
    return WelfareClass.BENEFITED if tz > theta_z_bar(t1) else WelfareClass.HARMED


def classify_welfare(thetas: ThetaPair, tol: float = 1e-9) -> WelfareClass:
    """Region rule for the IT's welfare, cross-checked against the solved alpha*."""
    if not thetas.theta_1 > 0:
        raise ThetaOutOfDomain(f"theta_1 must be > 0, got {thetas.theta_1!r}")
    eq = equilibrium_from_thetas(thetas)
    gap = eq.alpha_normalized - 1.0
    if abs(gap) <= tol:
        return WelfareClass.BOUNDARY
    region = welfare_by_region(thetas)
    solved = WelfareClass.BENEFITED if gap > 0 else WelfareClass.HARMED
    if region is not solved:
        raise WelfareMismatch(
            f"region rule says {region.value} but alpha*/(sigma_2/sigma_v) - 1 = {gap!r} "
            f"at theta_1={thetas.theta_1!r}, theta_z={thetas.theta_z!r}")
    return region


def partial_equilibrium_no_fast_noise(beta: float, theta_z: float, params: ModelParams):
    """IT intensity and HFT profit without fast noise traders, beta given.

    Returns ``(alpha, profit_hft)``.
    """
    if params.sigma_1 != 0:
        raise ParameterError("partial equilibrium requires sigma_1 = 0")
    if not (beta >= 0 and math.isfinite(beta)):
        raise ParameterError(f"beta must be finite and >= 0, got {beta!r}")
    if not (theta_z >= 0 and math.isfinite(theta_z)):
        raise ThetaOutOfDomain(f"theta_z must be finite and >= 0, got {theta_z!r}")
    ratio = params.sigma_2 / params.sigma_v
    if beta == 0:
        return ratio, 0.0
    return ratio * math.sqrt(theta_z / (theta_z + 1)), 0.0


def limit_alpha_theta1_zero(theta_z: float, params: ModelParams) -> float:
    if not (theta_z > 0 and math.isfinite(theta_z)):
        raise ThetaOutOfDomain(f"theta_z must be finite and > 0, got {theta_z!r}")
    k = SMALL_THETA1_Y ** 2 * theta_z ** (2 * SMALL_THETA1_X)
    return (params.sigma_2 / params.sigma_v) * math.sqrt((k + theta_z) / (k + theta_z + 1))


def limit_alpha_theta1_infinity(theta_z: float, params: ModelParams,
                                tol: float = sextic.DEFAULT_TOL) -> float:
    b = sextic.limit_beta_theta1_infinity(theta_z, tol)
    return (params.sigma_2 / params.sigma_v) * math.sqrt((b * b * theta_z + 1) / (1 - b) ** 2)


def limit_theta_z_infinity(params: ModelParams) -> dict:
    """Market without a useful HFT signal: the classic one-shot values."""
    half = params.sigma_v / (2 * params.sigma_2)
    return {
        "beta": 0.0,
        "alpha": params.sigma_2 / params.sigma_v,
        "profit_it": params.profit_scale,
        "profit_hft": 0.0,
        "lambda1": 0.0,
        "mu1": 0.0,
        "mu2": half,
        "lambda2": half,
    }
