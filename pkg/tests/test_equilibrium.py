import math

import numpy as np
import pytest

from hftkyle.equilibrium import (
    THETA1_ALWAYS_BENEFITED,
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
    welfare_by_region,
)
from hftkyle.errors import ParameterError, ThetaOutOfDomain
from hftkyle.fixed_point import projection_weight
from hftkyle.model import LinearStrategies, ModelParams, ThetaPair


def test_corollary_limit_point():
    eq = equilibrium_from_thetas(ThetaPair(1e9, 0.0))
    assert eq.alpha_normalized == pytest.approx(2.0, abs=1e-4)
    assert eq.beta == pytest.approx(0.5, abs=1e-4)


def test_large_signal_noise_limit():
    eq = equilibrium_from_thetas(ThetaPair(1.0, 1e6))
    assert eq.alpha == pytest.approx(1.0, abs=1e-3)
    assert eq.pricing.lambda_1 < 1e-3
    assert eq.pricing.mu_1 < 1e-3
    assert eq.pricing.mu_2 == pytest.approx(0.5, abs=1e-3)
    assert eq.lambda_2 == pytest.approx(0.5, abs=1e-3)
    assert eq.profit_hft_normalized < 1e-3


@pytest.mark.parametrize("t1, tz", [(1.0, 0.04), (0.05, 0.0), (0.2, 3.0), (8.0, 25.0), (1e-3, 0.5)])
@pytest.mark.parametrize("sv, s2", [(1.0, 1.0), (2.0, 0.5)])
def test_first_order_conditions(t1, tz, sv, s2):
    p = ModelParams.from_thetas(t1, tz, sv, s2)
    eq = solve_equilibrium(p)
    a, b = eq.alpha, eq.beta
    lam, m1, m2 = eq.pricing.lambda_1, eq.pricing.mu_1, eq.pricing.mu_2
    assert a == pytest.approx(1 / (2 * (m1 * b + m2 * (1 - b))), rel=1e-9)
    rho = projection_weight(a, p, eq.structure)
    assert rho == pytest.approx(a * a * sv * sv / (a * a * sv * sv + p.sigma_z ** 2), rel=1e-14)
    assert b == pytest.approx(m2 * rho / (2 * (m2 + lam - m1)), rel=1e-8)


def test_profit_identity(base_eq):
    assert base_eq.profit_it == pytest.approx(0.5 * base_eq.alpha, rel=1e-15)
    assert base_eq.profit_it_normalized == pytest.approx(base_eq.alpha_normalized, rel=1e-15)


def test_hft_profit():
    eq = equilibrium_from_thetas(ThetaPair(1.0, 0.04))
    assert hft_expected_profit(eq) == eq.profit_hft > 0
    zero = eq.__class__(strategies=LinearStrategies(1.0, 0.0), pricing=eq.pricing, lambda_2=0.0,
                        profit_it=0.5, profit_hft=0.0, params=eq.params)
    assert hft_expected_profit(zero) == 0.0
    assert equilibrium_from_thetas(ThetaPair(1.0, 1e6)).profit_hft_normalized < 1e-3


def test_theta1_zero_rejected():
    with pytest.raises(ThetaOutOfDomain, match="partial-equilibrium"):
        equilibrium_from_thetas(ThetaPair(0.0, 1.0))


@pytest.mark.parametrize("t1, tz, expected", [
    (0.2, 0.0, WelfareClass.BENEFITED),
    (0.1, 0.0, WelfareClass.HARMED),
    (THETA1_ALWAYS_BENEFITED, 0.0, WelfareClass.BOUNDARY),
    (0.2, 5.0, WelfareClass.BENEFITED),
    (0.05, 0.01, WelfareClass.HARMED),
])
def test_classify(t1, tz, expected):
    assert classify_welfare(ThetaPair(t1, tz)) is expected


def test_classify_domain():
    with pytest.raises(ThetaOutOfDomain):
        classify_welfare(ThetaPair(0.0, 1.0))


def test_theta_z_bar_right_end_is_zero():
    assert theta_z_bar(THETA1_ALWAYS_BENEFITED) == pytest.approx(0.0, abs=1e-12)
    # numerator vanishes algebraically: 2 sqrt(4t^2 + 10t + 5) = t + 5
    t = THETA1_ALWAYS_BENEFITED
    assert 2 * math.sqrt(4 * t * t + 10 * t + 5) == pytest.approx(t + 5, rel=1e-15)


def test_theta_z_bar_sign_change():
    bar = theta_z_bar(0.1)
    assert bar > 0
    lo = equilibrium_from_thetas(ThetaPair(0.1, bar - 1e-3)).alpha_normalized
    hi = equilibrium_from_thetas(ThetaPair(0.1, bar + 1e-3)).alpha_normalized
    assert lo < 1 < hi


def test_theta_z_bar_decreasing_in_theta1():
    values = [theta_z_bar(t) for t in (0.05, 0.10, 0.15)]
    assert values[0] > values[1] > values[2]


def test_theta_z_bar_domain():
    for t in (0.0, 0.2, -1.0):
        with pytest.raises(ThetaOutOfDomain):
            theta_z_bar(t)


def test_theta_z_tilde():
    assert theta_z_tilde(0.5) == 0.0
    assert theta_z_tilde(0.2) == pytest.approx(1.2, rel=1e-15)
    for t in (0.0, 0.6):
        with pytest.raises(ThetaOutOfDomain):
            theta_z_tilde(t)


def test_alpha_peaks_near_theta_z_tilde():
    grid = np.linspace(0.0, 3.0, 601)
    alphas = [equilibrium_from_thetas(ThetaPair(0.2, float(z))).alpha for z in grid]
    assert abs(grid[int(np.argmax(alphas))] - 1.2) <= 0.1


def test_region_rule():
    assert welfare_by_region(ThetaPair(0.16, 0.0)) is WelfareClass.BENEFITED
    assert welfare_by_region(ThetaPair(0.1, theta_z_bar(0.1) * 1.01)) is WelfareClass.BENEFITED
    assert welfare_by_region(ThetaPair(0.1, theta_z_bar(0.1) * 0.99)) is WelfareClass.HARMED


def test_partial_equilibrium():
    p = ModelParams(1.0, 0.0, 1.0, 1.0)
    assert partial_equilibrium_no_fast_noise(0.0, 1.0, p) == (1.0, 0.0)
    alpha, profit = partial_equilibrium_no_fast_noise(0.3, 1.0, p)
    assert alpha == math.sqrt(0.5) and profit == 0.0
    alpha, _ = partial_equilibrium_no_fast_noise(0.3, 1e8, ModelParams(1.0, 0.0, 1.0, 1e4))
    assert alpha == pytest.approx(1.0, abs=1e-4)
    with pytest.raises(ParameterError):
        partial_equilibrium_no_fast_noise(0.3, 1.0, ModelParams(1.0, 0.1, 1.0, 1.0))
    # raw units: sigma_2 / sigma_v scaling
    alpha, _ = partial_equilibrium_no_fast_noise(0.0, 1.0, ModelParams(2.0, 0.0, 3.0, 3.0))
    assert alpha == pytest.approx(1.5)


def test_limit_alpha_theta1_zero():
    p = ModelParams(1.0, 0.0, 1.0, 0.0)
    y = 1.3845
    assert limit_alpha_theta1_zero(1.0, p) == pytest.approx(math.sqrt((y * y + 1) / (y * y + 2)), rel=1e-15)
    for tz in (1e-3, 0.1, 1.0, 10.0, 1e3):
        assert limit_alpha_theta1_zero(tz, p) < 1
    with pytest.raises(ThetaOutOfDomain):
        limit_alpha_theta1_zero(0.0, p)


def test_small_theta1_consistency():
    p = ModelParams(1.0, 0.0, 1.0, 0.0)
    eq = equilibrium_from_thetas(ThetaPair(1e-6, 1.0))
    assert eq.alpha == pytest.approx(limit_alpha_theta1_zero(1.0, p), rel=0.02)
    assert eq.beta < 1e-2


def test_limit_alpha_theta1_infinity():
    p = ModelParams(1.0, 0.0, 1.0, 0.0)
    assert limit_alpha_theta1_infinity(0.0, p) == 2.0
    for tz in (0.04, 1.0, 25.0):
        big = equilibrium_from_thetas(ThetaPair(1e8, tz)).alpha
        assert limit_alpha_theta1_infinity(tz, p) == pytest.approx(big, rel=1e-4)
        assert limit_alpha_theta1_infinity(tz, p) > 1


def test_limit_theta_z_infinity_table():
    p = ModelParams(2.0, 0.0, 0.5, 0.0)
    t = limit_theta_z_infinity(p)
    assert t["alpha"] == 0.25 and t["mu2"] == 2.0 and t["lambda2"] == 2.0 and t["beta"] == 0.0


def test_small_theta_z_continuity():
    for t1 in (0.05, 1.0, 10.0):
        a = equilibrium_from_thetas(ThetaPair(t1, 0.0)).fields()
        b = equilibrium_from_thetas(ThetaPair(t1, 1e-8)).fields()
        for k in a:
            assert abs(a[k] - b[k]) <= 1e-6, k


def test_raw_and_theta_forms_agree():
    a = solve_equilibrium(ModelParams(2.0, 1.5, 0.5, 0.1))
    b = equilibrium_from_thetas(ThetaPair(9.0, 0.04), 2.0, 0.5)
    for k, v in a.fields().items():
        assert v == pytest.approx(b.fields()[k], rel=1e-9)
