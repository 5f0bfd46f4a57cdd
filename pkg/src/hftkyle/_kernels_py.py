"""Pure-Python/numpy kernels; same contract as the compiled ``_kernels``."""
import math

import numpy as np

N_SUMS = 10
SUM_NAMES = ("pi_it", "pi_it_sq", "pi_hft", "pi_hft_sq",
             "y1y1", "y1y2", "y2y2", "vy1", "vy2", "vv")


def horner(coeffs, x):
    """Evaluate a polynomial with the highest-degree coefficient first."""
    acc = 0.0
    for c in coeffs:
        acc = acc * x + c
    return acc


def horner_deriv(coeffs, x):
    p = 0.0
    dp = 0.0
    for c in coeffs:
        dp = dp * x + p
        p = p * x + c
    return p, dp


_SPLIT = 134217729.0  # 2**27 + 1


def _two_prod(a, b):
    p = a * b
    t = _SPLIT * a
    ah = t - (t - a)
    al = a - ah
    t = _SPLIT * b
    bh = t - (t - b)
    bl = b - bh
    return p, ((ah * bh - p) + ah * bl + al * bh) + al * bl


def _two_sum(a, b):
    s = a + b
    z = s - a
    return s, (a - (s - z)) + (b - z)


def horner_comp(coeffs, x):
    """Compensated Horner: about twice the working precision."""
    it = iter(coeffs)
    s = float(next(it, 0.0))
    comp = 0.0
    for c in it:
        p, e_p = _two_prod(s, x)
        s, e_s = _two_sum(p, c)
        comp = comp * x + (e_p + e_s)
    return s + comp


def _sign(v):
    return (v > 0) - (v < 0)


def bracket_root(coeffs, lo, hi, tol, max_iter=500):
    """Root in [lo, hi] given a strict sign change, to absolute accuracy tol.

    Safeguarded Newton: a Newton step is taken only when it stays inside the
    current bracket and halves the step; a Newton-converged point is certified
    by a sign change across a width-tol bracket before it is returned.
    """
    slo = _sign(horner_comp(coeffs, lo))
    if slo == 0:
        return lo
    if _sign(horner_comp(coeffs, hi)) == 0:
        return hi
    x = 0.5 * (lo + hi)
    step_old = hi - lo
    for _ in range(max_iter):
        if hi - lo <= tol:
            return 0.5 * (lo + hi)
        _, df = horner_deriv(coeffs, x)
        f = horner_comp(coeffs, x)
        sf = _sign(f)
        if sf == 0:
            return x
        if sf == slo:
            lo = x
        else:
            hi = x
        xn = 0.5 * (lo + hi)
        if df != 0.0:
            dx = f / df
            cand = x - dx
            if lo < cand < hi and abs(dx) < 0.5 * step_old:
                if abs(dx) < 0.25 * tol:
                    a = max(lo, cand - 0.5 * tol)
                    b = min(hi, cand + 0.5 * tol)
                    fa = _sign(horner_comp(coeffs, a))
                    fb = _sign(horner_comp(coeffs, b))
                    if fa == 0:
                        return a
                    if fb == 0:
                        return b
                    if fa != fb:
                        return _polish(coeffs, cand, a, b)
                else:
                    xn = cand
                    step_old = abs(dx)
        if xn == 0.5 * (lo + hi):
            step_old = hi - lo
        x = xn
    return 0.5 * (lo + hi)


def _polish(coeffs, x, a, b):
    # a few Newton steps inside the certified bracket, kept only while |f| drops
    _, df = horner_deriv(coeffs, x)
    f = horner_comp(coeffs, x)
    for _ in range(3):
        if f == 0.0 or df == 0.0:
            break
        nxt = x - f / df
        if not a <= nxt <= b:
            break
        _, dfn = horner_deriv(coeffs, nxt)
        fn = horner_comp(coeffs, nxt)
        if abs(fn) >= abs(f):
            break
        x, f, df = nxt, fn, dfn
    return x


def accumulate_paths(v, z, u1, u2, alpha, beta, lambda_1, mu_1, mu_2, aggregate):
    """Sums over one chunk of paths, in the order of SUM_NAMES."""
    i = alpha * v
    signal = i + z + u2 if aggregate else i + z
    x = beta * signal
    y1 = x + u1
    y2 = i + u2 - x
    p1 = lambda_1 * y1
    p2 = mu_1 * y1 + mu_2 * y2
    pi_it = (v - p2) * i
    pi_hft = (p2 - p1) * x
    return np.array([
        np.sum(pi_it), np.dot(pi_it, pi_it), np.sum(pi_hft), np.dot(pi_hft, pi_hft),
        np.dot(y1, y1), np.dot(y1, y2), np.dot(y2, y2),
        np.dot(v, y1), np.dot(v, y2), np.dot(v, v),
    ])


def fsum_rows(rows):
    """Exactly rounded column sums; independent of row order."""
    rows = np.asarray(rows, dtype=float)
    return np.array([math.fsum(rows[:, k]) for k in range(rows.shape[1])])
