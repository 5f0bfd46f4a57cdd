"""Primitive parameters and the Gaussian projection engine.

Everything here is analytic: order-flow second moments are assembled in closed
form from the linear strategies, and dealer prices are the linear projections
of ``v`` on the order flow. Prices are deviations from the prior mean ``p_0``.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Any, Mapping, NamedTuple

from .errors import NegativeSigma, NonFinite, NonPositiveSigma, SingularInformation


class SignalStructure(enum.Enum):
    OWN_ORDER = "own"  # signal = i + z
    AGGREGATE_ORDER = "aggregate"  # signal = i + u2 + z


@dataclass(frozen=True)
class ModelParams:
    sigma_v: float
    sigma_1: float
    sigma_2: float
    sigma_z: float
    p_0: float = 0.0

    def __post_init__(self):
        for name in ("sigma_v", "sigma_1", "sigma_2", "sigma_z", "p_0"):
            value = getattr(self, name)
            if not isinstance(value, (int, float)) or isinstance(value, bool):
                raise NonFinite(f"{name} must be a real number, got {value!r}")
            if not math.isfinite(value):
                raise NonFinite(f"{name} must be finite, got {value!r}")
        if self.sigma_v <= 0:
            raise NonPositiveSigma(f"sigma_v must be > 0, got {self.sigma_v!r}")
        if self.sigma_2 <= 0:
            raise NonPositiveSigma(f"sigma_2 must be > 0, got {self.sigma_2!r}")
        if self.sigma_1 < 0:
            raise NegativeSigma(f"sigma_1 must be >= 0, got {self.sigma_1!r}")
        if self.sigma_z < 0:
            raise NegativeSigma(f"sigma_z must be >= 0, got {self.sigma_z!r}")

    @classmethod
    def from_thetas(cls, theta_1, theta_z, sigma_v=1.0, sigma_2=1.0, p_0=0.0):
        if not (math.isfinite(theta_1) and math.isfinite(theta_z)):
            raise NonFinite("theta values must be finite")
        if theta_1 < 0 or theta_z < 0:
            raise NegativeSigma("theta values must be >= 0")
        return cls(
            sigma_v=float(sigma_v),
            sigma_1=float(sigma_2 * math.sqrt(theta_1)),
            sigma_2=float(sigma_2),
            sigma_z=float(sigma_2 * math.sqrt(theta_z)),
            p_0=float(p_0),
        )

    @property
    def thetas(self) -> ThetaPair:
        return thetas_from_params(self)

    @property
    def profit_scale(self) -> float:
        """No-HFT expected IT profit, sigma_v * sigma_2 / 2."""
        return 0.5 * self.sigma_v * self.sigma_2


@dataclass(frozen=True)
class ThetaPair:
    theta_1: float
    theta_z: float


@dataclass(frozen=True)
class LinearStrategies:
    alpha: float
    beta: float

    def __post_init__(self):
        if not (math.isfinite(self.alpha) and math.isfinite(self.beta)):
            raise NonFinite(f"strategies must be finite, got {self!r}")
        if self.alpha <= 0:
            raise NonPositiveSigma(f"alpha must be > 0, got {self.alpha!r}")


@dataclass(frozen=True)
class PricingCoefficients:
    lambda_1: float
    mu_1: float
    mu_2: float


@dataclass(frozen=True)
class Equilibrium:
    strategies: LinearStrategies
    pricing: PricingCoefficients
    lambda_2: float
    profit_it: float
    profit_hft: float
    params: ModelParams
    structure: SignalStructure = SignalStructure.OWN_ORDER
    meta: dict = field(default_factory=dict, compare=False)

    @property
    def alpha(self) -> float:
        return self.strategies.alpha

    @property
    def beta(self) -> float:
        return self.strategies.beta

    @property
    def alpha_normalized(self) -> float:
        return self.strategies.alpha * self.params.sigma_v / self.params.sigma_2

    @property
    def profit_it_normalized(self) -> float:
        return self.profit_it / self.params.profit_scale

    @property
    def profit_hft_normalized(self) -> float:
        return self.profit_hft / self.params.profit_scale

    def fields(self) -> dict[str, float]:
        """Flat numeric view used for field-wise comparisons."""
        return {
            "alpha": self.strategies.alpha,
            "beta": self.strategies.beta,
            "lambda_1": self.pricing.lambda_1,
            "mu_1": self.pricing.mu_1,
            "mu_2": self.pricing.mu_2,
            "lambda_2": self.lambda_2,
            "profit_it": self.profit_it,
            "profit_hft": self.profit_hft,
        }


def validate_params(raw: Mapping[str, Any]) -> ModelParams:
    """Build :class:`ModelParams` from a loose mapping, never clamping."""
    values = {}
    for name in ("sigma_v", "sigma_1", "sigma_2", "sigma_z", "p_0"):
        if name not in raw:
            if name == "p_0":
                continue
            raise NonFinite(f"missing parameter {name}")
        try:
            values[name] = float(raw[name])
        except (TypeError, ValueError) as exc:
            raise NonFinite(f"{name} is not a number: {raw[name]!r}") from exc
    return ModelParams(**values)


def thetas_from_params(params: ModelParams) -> ThetaPair:
    s2 = params.sigma_2 * params.sigma_2
    return ThetaPair(
        theta_1=params.sigma_1 * params.sigma_1 / s2,
        theta_z=params.sigma_z * params.sigma_z / s2,
    )


class Moments(NamedTuple):
    """Second moments of (v, y1, y2, signal) under linear strategies."""

    var_v: float
    cov_v_y1: float
    cov_v_y2: float
    var_y1: float
    var_y2: float
    cov_y1_y2: float
    var_signal: float
    cov_target_signal: float  # target is i (own) or i + u2 (aggregate)


def order_flow_moments(strategies: LinearStrategies, params: ModelParams,
                       structure: SignalStructure = SignalStructure.OWN_ORDER) -> Moments:
    a, b = strategies.alpha, strategies.beta
    var_v = params.sigma_v ** 2
    var_i = a * a * var_v
    s1sq, s2sq, szsq = params.sigma_1 ** 2, params.sigma_2 ** 2, params.sigma_z ** 2
    # y1 = b*q + b*z + u1 and y2 = (1-b)*q + w - b*z, where q is the predicted
    # quantity and w the part of y2 the signal misses (u2 for own, 0 for aggregate)
    if structure is SignalStructure.OWN_ORDER:
        var_q, var_w = var_i, s2sq
    else:
        var_q, var_w = var_i + s2sq, 0.0
    return Moments(
        var_v=var_v,
        cov_v_y1=b * a * var_v,
        cov_v_y2=(1.0 - b) * a * var_v,
        var_y1=b * b * (var_q + szsq) + s1sq,
        var_y2=(1.0 - b) ** 2 * var_q + var_w + b * b * szsq,
        cov_y1_y2=b * (1.0 - b) * var_q - b * b * szsq,
        var_signal=var_q + szsq,
        cov_target_signal=var_q,
    )


def order_flow_correlation(strategies, params, structure=SignalStructure.OWN_ORDER) -> float:
    m = order_flow_moments(strategies, params, structure)
    return m.cov_y1_y2 / math.sqrt(m.var_y1 * m.var_y2)


def dealer_pricing(strategies: LinearStrategies, params: ModelParams,
                   structure: SignalStructure = SignalStructure.OWN_ORDER) -> PricingCoefficients:
    """Weak-efficiency prices: projections of v on y1 and on (y1, y2)."""
    m = order_flow_moments(strategies, params, structure)
    if not m.var_y1 > 0:
        raise SingularInformation("Var(y1) = 0: time-1 order flow carries no randomness")
    det = m.var_y1 * m.var_y2 - m.cov_y1_y2 ** 2
    # relative test; the Gram matrix is PSD so det >= 0 up to rounding
    if not det > 1e-14 * m.var_y1 * m.var_y2:
        raise SingularInformation("Gram matrix of (y1, y2) is singular")
    # sequential projection (v on y1, then on the innovation in y2) keeps the
    # normal-equation residuals at rounding level even when y1, y2 are nearly collinear
    lambda_1 = m.cov_v_y1 / m.var_y1
    k = m.cov_y1_y2 / m.var_y1
    mu_2 = (m.cov_v_y2 - k * m.cov_v_y1) / (m.var_y2 - k * m.cov_y1_y2)
    mu_1 = lambda_1 - k * mu_2
    return PricingCoefficients(lambda_1=lambda_1, mu_1=mu_1, mu_2=mu_2)


def innovation_impact(strategies, params, structure=SignalStructure.OWN_ORDER) -> float:
    """Time-2 impact on the order-flow surprise.

    Writes p2 = p1 + lambda_2 * (y2 - E[y2 | y1]) and returns
    lambda_2 = Cov(v, e) / Var(e) for the innovation e. Algebraically this equals
    mu_2, the weight of y2 in the time-2 price.
    """
    m = order_flow_moments(strategies, params, structure)
    k = m.cov_y1_y2 / m.var_y1
    cov_v_e = m.cov_v_y2 - k * m.cov_v_y1
    var_e = m.var_y2 - k * m.cov_y1_y2
    if not var_e > 0:
        raise SingularInformation("time-2 order flow has no innovation")
    return cov_v_e / var_e


def it_expected_profit(strategies, pricing, params, structure=SignalStructure.OWN_ORDER) -> float:
    """E[(v - p2) i] with i = alpha v, pricing held fixed."""
    a, b = strategies.alpha, strategies.beta
    var_v = params.sigma_v ** 2
    k = pricing.mu_1 * b + pricing.mu_2 * (1.0 - b)
    # Cov(v, y1) = b a var_v and Cov(v, y2) = (1-b) a var_v for both structures
    return a * var_v - a * a * var_v * k


def hft_expected_profit_from(strategies, pricing, params, structure=SignalStructure.OWN_ORDER) -> float:
    """E[(p2 - p1) x] with x = beta * signal, pricing held fixed."""
    m = order_flow_moments(strategies, params, structure)
    b = strategies.beta
    lam1, mu1, mu2 = pricing.lambda_1, pricing.mu_1, pricing.mu_2
    # p2 - p1 = (mu1 - lam1)(x + u1) + mu2 (q + w - x), u1 and w independent of x
    return (mu1 - lam1 - mu2) * b * b * m.var_signal + mu2 * b * m.cov_target_signal
