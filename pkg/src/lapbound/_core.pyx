# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled numerical kernels (same interface as ``_pycore``)."""

import numpy as np
cimport numpy as cnp
from libc.math cimport exp, expm1, log, log1p, lgamma, pow, isinf, fabs, INFINITY

cnp.import_array()



cdef inline double _lgamma_diff(double x, double m) nogil:
    # lgamma(x) - lgamma(x + m) for x > 0, m > 0
    cdef double xm
    if x < 50.0:
        return lgamma(x) - lgamma(x + m)
    xm = x + m
    return (-(x - 0.5) * log1p(m / x) - m * log(xm) + m
            + (1.0 / x - 1.0 / xm) / 12.0
            - (1.0 / (x * x * x) - 1.0 / (xm * xm * xm)) / 360.0
            + (1.0 / pow(x, 5) - 1.0 / pow(xm, 5)) / 1260.0)


cdef inline double _betaln(double x, double m) nogil:
    return _lgamma_diff(x, m) + lgamma(m)


cdef double _digamma(double x) nogil:
    cdef double acc = 0.0, x2
    while x < 6.0:
        acc -= 1.0 / x
        x += 1.0
    x2 = 1.0 / (x * x)
    return acc + log(x) - 0.5 / x - x2 * (1.0 / 12.0 - x2 * (1.0 / 120.0 - x2 * (1.0 / 252.0 - x2 * (1.0 / 240.0 - x2 / 132.0))))


cdef double _digamma_diff(double x, double h) nogil:
    cdef double xh
    if x <= 1.0e3:
        return _digamma(x + h) - _digamma(x)
    xh = x + h
    return (log1p(h / x) - 0.5 * (1.0 / xh - 1.0 / x)
            - (1.0 / (xh * xh) - 1.0 / (x * x)) / 12.0
            + (1.0 / pow(xh, 4) - 1.0 / pow(x, 4)) / 120.0
            - (1.0 / pow(xh, 6) - 1.0 / pow(x, 6)) / 252.0)


cdef inline bint _small_integer(double delta) nogil:
    return delta == <double>(<long>delta) and delta <= 32.0


cdef double _factorial(long n) nogil:
    cdef double f = 1.0
    cdef long i
    for i in range(2, n + 1):
        f *= i
    return f


cdef double _tail_one(double z, double b, double delta, double lam) nogil:
    cdef double zl = pow(z, lam), big_l, em1, x, d, prod
    cdef long j, n
    if isinf(b):
        return 1.0 / (delta * zl)
    big_l = lam * log(b / z)
    if delta == 1.0:
        return -expm1(-big_l) / zl
    em1 = expm1(big_l)
    x = delta / em1
    d = zl * em1
    if _small_integer(delta):
        n = <long>delta
        prod = 1.0
        for j in range(n + 1):
            prod *= x + j
        return _factorial(n) / (d * prod)
    return exp(_betaln(x, delta + 1.0)) / d


cdef double _tail_deriv_one(double t, double b, double delta, double lam) nogil:
    cdef double tl = pow(t, lam), big_l, em1, x, d, prod, harmonic, beta
    cdef long j, n
    if isinf(b):
        return lam / (delta * t * tl)
    if delta == 1.0:
        return lam / (t * tl)
    big_l = lam * log(b / t)
    em1 = expm1(big_l)
    x = delta / em1
    d = tl * em1
    if _small_integer(delta):
        n = <long>delta
        prod = 1.0
        harmonic = 0.0
        for j in range(n):
            prod *= x + j
            harmonic += 1.0 / (x + j)
        beta = _factorial(n - 1) / prod
    else:
        beta = exp(_betaln(x, delta))
        harmonic = _digamma_diff(x, delta)
    return lam * tl / t * delta * beta * harmonic / (d * d)


def tail_integral(z, double b, double delta, double lam):
    cdef cnp.ndarray[cnp.float64_t, ndim=1] zz = np.ascontiguousarray(np.atleast_1d(z), dtype=np.float64).ravel()
    cdef Py_ssize_t i, n = zz.shape[0]
    out = np.empty(n, dtype=np.float64)
    cdef double[::1] o = out
    with nogil:
        for i in range(n):
            o[i] = _tail_one(zz[i], b, delta, lam)
    return out.reshape(np.shape(z))


def tail_derivative(t, double b, double delta, double lam):
    cdef cnp.ndarray[cnp.float64_t, ndim=1] tt = np.ascontiguousarray(np.atleast_1d(t), dtype=np.float64).ravel()
    cdef Py_ssize_t i, n = tt.shape[0]
    out = np.empty(n, dtype=np.float64)
    cdef double[::1] o = out
    with nogil:
        for i in range(n):
            o[i] = _tail_deriv_one(tt[i], b, delta, lam)
    return out.reshape(np.shape(t))


cdef struct _Ctx:
    double zl
    double dl
    double s
    double delta
    bint inf_b


cdef inline double _g(_Ctx* c, double u) nogil:
    cdef double x, base
    if u <= 0.0 or u >= 1.0:
        return 0.0
    x = c.s * u / (1.0 - u)
    base = exp(-x * c.zl)
    if not c.inf_b:
        base *= -expm1(-x * c.dl)
    if base <= 0.0:
        return 0.0
    return pow(base, c.delta) * c.s / ((1.0 - u) * (1.0 - u))


cdef double _simpson(_Ctx* c, double a, double b, double fa, double fm, double fb,
                     double whole, double tol, int depth) nogil:
    cdef double m = 0.5 * (a + b)
    cdef double lm = 0.5 * (a + m), rm = 0.5 * (m + b)
    cdef double flm = _g(c, lm), frm = _g(c, rm)
    cdef double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm)
    cdef double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb)
    cdef double ds = left + right - whole
    if depth >= 50 or fabs(ds) <= 15.0 * tol:
        return left + right + ds / 15.0
    return (_simpson(c, a, m, fa, flm, fm, left, 0.5 * tol, depth + 1)
            + _simpson(c, m, b, fm, frm, fb, right, 0.5 * tol, depth + 1))


def tail_quad(double z, double b, double delta, double lam, double rtol=1e-11):
    cdef _Ctx c
    cdef int i, n = 256
    cdef double h, coarse, eps, fa, fm, fb, whole, result
    c.zl = pow(z, lam)
    c.inf_b = isinf(b)
    c.dl = INFINITY if c.inf_b else pow(b, lam) - c.zl
    c.s = 1.0 / c.zl
    c.delta = delta
    with nogil:
        h = 1.0 / n
        coarse = _g(&c, 0.0) + _g(&c, 1.0)
        for i in range(1, n):
            coarse += (4.0 if i % 2 else 2.0) * _g(&c, i * h)
        coarse *= h / 3.0
        eps = fabs(coarse) * rtol
        if eps < 1e-300:
            eps = 1e-300
        fa = _g(&c, 0.0)
        fm = _g(&c, 0.5)
        fb = _g(&c, 1.0)
        whole = (fa + 4.0 * fm + fb) / 6.0
        result = _simpson(&c, 0.0, 1.0, fa, fm, fb, whole, eps, 0)
    return result


def kernel_matrix(x, y, double lam, cutoff=None):
    cdef double[::1] xv = np.ascontiguousarray(x, dtype=np.float64)
    cdef double[::1] ylam = np.ascontiguousarray(np.asarray(y, dtype=np.float64) ** lam)
    cdef Py_ssize_t m = xv.shape[0], n = ylam.shape[0], i, j
    out = np.empty((m, n), dtype=np.float64)
    cdef double[:, ::1] o = out
    cdef double[::1] clam
    cdef bint local = cutoff is not None
    if local:
        clam = np.ascontiguousarray(np.asarray(cutoff, dtype=np.float64) ** lam)
    else:
        clam = ylam
    with nogil:
        for i in range(m):
            for j in range(n):
                o[i, j] = exp(-xv[i] * ylam[j])
                if local and not isinf(clam[j]):
                    o[i, j] -= exp(-xv[i] * clam[j])
    return out


def tail_scalar(double z, double b, double delta, double lam):
    return _tail_one(z, b, delta, lam)


def tail_derivative_scalar(double t, double b, double delta, double lam):
    return _tail_deriv_one(t, b, delta, lam)
