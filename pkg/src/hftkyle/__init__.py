"""Two-period Kyle model with a front-running high-frequency trader.

Closed-form equilibrium (:mod:`.equilibrium`), an independent best-response
fixed point (:mod:`.fixed_point`), and a Monte Carlo game simulator
(:mod:`.simulator`). Hot loops live in :mod:`.kernels`, compiled when possible.
"""
from .equilibrium import (
    WelfareClass,
    classify_welfare,
    equilibrium_from_thetas,
    hft_expected_profit,
    limit_alpha_theta1_infinity,
    limit_alpha_theta1_zero,
    limit_theta_z_infinity,
    partial_equilibrium_no_fast_noise,
    solve_equilibrium,
    theta_z_bar,
    theta_z_tilde,
)
from .fixed_point import FixedPointConfig, solve_fixed_point, solve_partial_fixed_point
from .kernels import BACKEND
from .model import (
    Equilibrium,
    LinearStrategies,
    ModelParams,
    PricingCoefficients,
    SignalStructure,
    ThetaPair,
    dealer_pricing,
    thetas_from_params,
    validate_params,
)
from .sextic import build_beta_polynomial, limit_beta_theta1_infinity, solve_beta
from .simulator import SimulationConfig, profit_scan, simulate_game

__version__ = "0.1.0"

__all__ = [
    "BACKEND", "Equilibrium", "FixedPointConfig", "LinearStrategies", "ModelParams",
    "PricingCoefficients", "SignalStructure", "SimulationConfig", "ThetaPair", "WelfareClass",
    "build_beta_polynomial", "classify_welfare", "dealer_pricing", "equilibrium_from_thetas",
    "hft_expected_profit", "limit_alpha_theta1_infinity", "limit_alpha_theta1_zero",
    "limit_beta_theta1_infinity", "limit_theta_z_infinity", "partial_equilibrium_no_fast_noise",
    "profit_scan", "simulate_game", "solve_beta", "solve_equilibrium", "solve_fixed_point",
    "solve_partial_fixed_point", "theta_z_bar", "theta_z_tilde", "thetas_from_params",
    "validate_params",
]
