"""The degree-6 equilibrium condition in the HFT intensity and its real roots.

Roots are isolated by partitioning the interval at the critical points of the
polynomial (found recursively from its derivative), so every sub-interval is
monotone and holds at most one root. Each sign change is then refined with a
safeguarded Newton iteration from :mod:`hftkyle.kernels`.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from . import kernels
from .errors import MultipleRootsInUnitInterval, NoRootInUnitInterval, ThetaOutOfDomain
from .model import ThetaPair

DEFAULT_TOL = 1e-12
_TRIM = 1e-300


@dataclass(frozen=True)
class BetaPolynomial:
    coefficients: tuple  # degree-6 term first
    theta_pair: ThetaPair

    def __call__(self, beta: float) -> float:
        return kernels.horner(self.coefficients, beta)

    @property
    def degree(self) -> int:
        return len(trim(self.coefficients)) - 1


def build_beta_polynomial(thetas: ThetaPair) -> BetaPolynomial:
    t1, tz = thetas.theta_1, thetas.theta_z
    if not t1 > 0:
        raise ThetaOutOfDomain(
            f"theta_1 must be > 0 for the full equilibrium, got {t1!r}; "
            "theta_1 = 0 has only the partial equilibrium")
    if tz < 0:
        raise ThetaOutOfDomain(f"theta_z must be >= 0, got {tz!r}")
    t1_2, t1_3 = t1 * t1, t1 * t1 * t1
    tz_2, tz_3 = tz * tz, tz * tz * tz
    if tz == 0:
        c6 = c5 = c4 = 0.0
    else:
        c6 = 4 * t1 * tz_2 + t1 * tz_3 + 2 * t1_2 * tz_2 + 2 * tz_2 + tz_3
        c5 = (4 * t1 * tz + 4 * t1 * tz_2 + 2 * t1 * tz_3 + 8 * t1_2 * tz
              + 4 * t1_2 * tz_2 + 4 * t1_3 * tz)
        c4 = 2 * t1 * tz + t1 * tz_2 - 11 * t1_2 * tz - 8 * t1_2 * tz_2 - 13 * t1_3 * tz
    c3 = 2 * t1_2 + 2 * t1_3 + 8 * t1_2 * tz + 4 * t1_2 * tz_2 + 16 * t1_3 * tz
    c2 = -(t1_2 * tz + 5 * t1_3 + 9 * t1_3 * tz)
    c1 = 4 * t1_3 + 2 * t1_3 * tz
    c0 = -t1_3
    return BetaPolynomial(coefficients=(c6, c5, c4, c3, c2, c1, c0), theta_pair=thetas)


def limit_quintic(theta_z: float) -> tuple:
    """Coefficients of the theta_1 -> infinity limit of the equilibrium condition."""
    tz = theta_z
    return (4 * tz, -13 * tz, 2 + 16 * tz, -(5 + 9 * tz), 4 + 2 * tz, -1)


def limit_cubic_factor(theta_z: float) -> tuple:
    """The quintic divided by (beta - 1)^2.

    beta = 1 is a double root of the quintic for every theta_z; in floating
    point it splits into a spurious pair near 1, so roots come from this factor.
    """
    tz = theta_z
    return (4 * tz, -5 * tz, 2 + 2 * tz, -1)


def trim(coeffs) -> list:
    c = [float(x) for x in coeffs]
    k = 0
    while k < len(c) - 1 and abs(c[k]) < _TRIM:
        k += 1
    return c[k:]


def derivative(coeffs) -> list:
    n = len(coeffs) - 1
    return [c * (n - k) for k, c in enumerate(coeffs[:-1])]


def _rounding_bound(coeffs, x):
    # running-error style bound on |horner(coeffs, x)| from rounding alone
    ax = abs(x)
    s = 0.0
    for c in coeffs:
        s = s * ax + abs(c)
    return 16 * len(coeffs) * 2.220446049250313e-16 * s


def real_roots(coeffs, lo: float, hi: float, tol: float = DEFAULT_TOL) -> list:
    """All distinct real roots in [lo, hi], ascending, each to within tol."""
    c = trim(coeffs)
    deg = len(c) - 1
    if deg <= 0:
        return []
    if deg == 1:
        r = -c[1] / c[0]
        return [r] if lo <= r <= hi else []
    crit = [x for x in real_roots(derivative(c), lo, hi, tol) if lo < x < hi]
    knots = [lo, *crit, hi]
    vals = [kernels.horner_comp(c, x) for x in knots]
    roots = []
    for k in range(len(knots) - 1):
        a, b = knots[k], knots[k + 1]
        fa, fb = vals[k], vals[k + 1]
        if fa == 0:
            roots.append(a)
        elif 0 < k and abs(fa) <= _rounding_bound(c, a):
            # tangential root sitting on a critical point
            roots.append(a)
        elif fb != 0 and (fa < 0) != (fb < 0):
            roots.append(kernels.bracket_root(c, a, b, tol))
    if vals[-1] == 0:
        roots.append(hi)
    roots.sort()
    merged = []
    for r in roots:
        if merged and r - merged[-1] <= tol:
            continue
        merged.append(r)
    return merged


def _unit_interval_root(coeffs, tol, what):
    roots = real_roots(coeffs, 0.0, 1.0, tol)
    interior = [r for r in roots if tol < r < 1.0 - tol]
    rejected = [r for r in roots if r not in interior]
    if not interior:
        raise NoRootInUnitInterval(f"{what}: no root in (0, 1)", roots, rejected, coeffs)
    if len(interior) > 1:
        raise MultipleRootsInUnitInterval(
            f"{what}: {len(interior)} roots in (0, 1): {interior}", roots, rejected, coeffs)
    return interior[0]


def _check_tol(tol):
    if not 0 < tol <= 1e-6:
        raise ValueError(f"tol must lie in (0, 1e-6], got {tol!r}")


def solve_beta(thetas: ThetaPair, tol: float = DEFAULT_TOL) -> float:
    """Unique root in (0, 1) of the equilibrium condition; raises otherwise."""
    _check_tol(tol)
    poly = build_beta_polynomial(thetas)
    return _unit_interval_root(
        poly.coefficients, tol, f"theta_1={thetas.theta_1!r}, theta_z={thetas.theta_z!r}")


def limit_beta_theta1_infinity(theta_z: float, tol: float = DEFAULT_TOL) -> float:
    _check_tol(tol)
    if not (theta_z >= 0 and math.isfinite(theta_z)):
        raise ThetaOutOfDomain(f"theta_z must be finite and >= 0, got {theta_z!r}")
    return _unit_interval_root(limit_cubic_factor(theta_z), tol, f"limit quintic, theta_z={theta_z!r}")


def residual(thetas: ThetaPair, beta: float) -> float:
    return kernels.horner(build_beta_polynomial(thetas).coefficients, beta)


# --- exact Sturm counting (independent check, rational arithmetic) ---------

def _poly_rem(a, b):
    a = list(a)
    while len(a) >= len(b) and any(a):
        if a[0] == 0:
            a.pop(0)
            continue
        q = a[0] / b[0]
        for k in range(len(b)):
            a[k] -= q * b[k]
        a.pop(0)
    while a and a[0] == 0:
        a.pop(0)
    return a


def _sign_changes(seq, x):
    vals = []
    for p in seq:
        acc = Fraction(0)
        for c in p:
            acc = acc * x + c
        if acc != 0:
            vals.append(acc > 0)
    return sum(1 for u, w in zip(vals, vals[1:]) if u != w)


def sturm_count(coeffs, lo=0.0, hi=1.0) -> int:
    """Number of distinct real roots in the open interval (lo, hi), exactly."""
    p = [Fraction(c) for c in coeffs]
    while p and p[0] == 0:
        p.pop(0)
    if len(p) <= 1:
        return 0
    n = len(p) - 1
    seq = [p, [c * (n - k) for k, c in enumerate(p[:-1])]]
    while len(seq[-1]) > 1:
        r = _poly_rem(seq[-2], seq[-1])
        if not r:
            break
        seq.append([-c for c in r])
    a, b = Fraction(lo), Fraction(hi)
    count = _sign_changes(seq, a) - _sign_changes(seq, b)  # roots in (a, b]
    at_b = Fraction(0)
    for c in p:
        at_b = at_b * b + c
    return count - (1 if at_b == 0 else 0)
