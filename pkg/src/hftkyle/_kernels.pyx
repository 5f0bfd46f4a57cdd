# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels; contract identical to ``_kernels_py``."""
import numpy as np
from libc.math cimport fabs, fma, fmax, fmin

cdef enum:
    NS = 10


cdef inline double _horner(const double[::1] c, double x) noexcept nogil:
    cdef double acc = 0.0
    cdef Py_ssize_t k
    for k in range(c.shape[0]):
        acc = acc * x + c[k]
    return acc


cdef inline double _horner_comp(const double[::1] c, double x) noexcept nogil:
    cdef double s, p, e_p, e_s, t, comp = 0.0
    cdef Py_ssize_t k
    if c.shape[0] == 0:
        return 0.0
    s = c[0]
    for k in range(1, c.shape[0]):
        p = s * x
        e_p = fma(s, x, -p)
        t = p + c[k]
        e_s = (p - (t - (t - p))) + (c[k] - (t - p))
        s = t
        comp = comp * x + (e_p + e_s)
    return s + comp


cdef inline double _deriv(const double[::1] c, double x) noexcept nogil:
    cdef double p = 0.0, dp = 0.0
    cdef Py_ssize_t k
    for k in range(c.shape[0]):
        dp = dp * x + p
        p = p * x + c[k]
    return dp


cdef inline int _sign(double v) noexcept nogil:
    return (v > 0) - (v < 0)


cdef double _polish(const double[::1] c, double x, double a, double b) noexcept nogil:
    cdef double f, df, fn, nxt
    cdef int it
    f = _horner_comp(c, x)
    df = _deriv(c, x)
    for it in range(3):
        if f == 0.0 or df == 0.0:
            break
        nxt = x - f / df
        if not (a <= nxt <= b):
            break
        fn = _horner_comp(c, nxt)
        if fabs(fn) >= fabs(f):
            break
        x = nxt
        f = fn
        df = _deriv(c, nxt)
    return x


def horner(coeffs, double x):
    cdef double[::1] c = np.ascontiguousarray(coeffs, dtype=np.float64)
    return _horner(c, x)


def horner_comp(coeffs, double x):
    cdef double[::1] c = np.ascontiguousarray(coeffs, dtype=np.float64)
    return _horner_comp(c, x)


def horner_deriv(coeffs, double x):
    cdef double[::1] c = np.ascontiguousarray(coeffs, dtype=np.float64)
    return _horner(c, x), _deriv(c, x)


def bracket_root(coeffs, double lo, double hi, double tol, int max_iter=500):
    cdef double[::1] c = np.ascontiguousarray(coeffs, dtype=np.float64)
    cdef double x, f, df, dx, cand, xn, a, b, step_old
    cdef int slo, sf, fa, fb, it
    slo = _sign(_horner_comp(c, lo))
    if slo == 0:
        return lo
    if _sign(_horner_comp(c, hi)) == 0:
        return hi
    x = 0.5 * (lo + hi)
    step_old = hi - lo
    for it in range(max_iter):
        if hi - lo <= tol:
            return 0.5 * (lo + hi)
        f = _horner_comp(c, x)
        df = _deriv(c, x)
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
            if lo < cand < hi and fabs(dx) < 0.5 * step_old:
                if fabs(dx) < 0.25 * tol:
                    a = fmax(lo, cand - 0.5 * tol)
                    b = fmin(hi, cand + 0.5 * tol)
                    fa = _sign(_horner_comp(c, a))
                    fb = _sign(_horner_comp(c, b))
                    if fa == 0:
                        return a
                    if fb == 0:
                        return b
                    if fa != fb:
                        return _polish(c, cand, a, b)
                else:
                    xn = cand
                    step_old = fabs(dx)
        if xn == 0.5 * (lo + hi):
            step_old = hi - lo
        x = xn
    return 0.5 * (lo + hi)


def accumulate_paths(const double[::1] v, const double[::1] z,
                     const double[::1] u1, const double[::1] u2,
                     double alpha, double beta, double lambda_1,
                     double mu_1, double mu_2, bint aggregate):
    cdef Py_ssize_t n = v.shape[0], p, k
    cdef double s[NS]
    cdef double comp[NS]
    cdef double term[NS]
    cdef double i, sig, x, y1, y2, p1, p2, pit, phft, t
    for k in range(NS):
        s[k] = 0.0
        comp[k] = 0.0
    with nogil:
        for p in range(n):
            i = alpha * v[p]
            sig = i + z[p]
            if aggregate:
                sig = sig + u2[p]
            x = beta * sig
            y1 = x + u1[p]
            y2 = i + u2[p] - x
            p1 = lambda_1 * y1
            p2 = mu_1 * y1 + mu_2 * y2
            pit = (v[p] - p2) * i
            phft = (p2 - p1) * x
            term[0] = pit
            term[1] = pit * pit
            term[2] = phft
            term[3] = phft * phft
            term[4] = y1 * y1
            term[5] = y1 * y2
            term[6] = y2 * y2
            term[7] = v[p] * y1
            term[8] = v[p] * y2
            term[9] = v[p] * v[p]
            # Neumaier compensated summation
            for k in range(NS):
                t = s[k] + term[k]
                if fabs(s[k]) >= fabs(term[k]):
                    comp[k] += (s[k] - t) + term[k]
                else:
                    comp[k] += (term[k] - t) + s[k]
                s[k] = t
    return np.array([s[k] + comp[k] for k in range(NS)])
