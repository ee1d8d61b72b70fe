"""Pure numpy/scipy implementation of the numerical kernels.

This is the fallback used when the compiled ``_core`` extension is not
available.  Both modules expose the same functions with identical
semantics; ``lapbound._backend`` picks one at import time.
"""

from __future__ import annotations

import math

import numpy as np
from scipy import special

_ASYMPTOTIC_X = 1.0e3


def _digamma_diff(x, h):
    """psi(x + h) - psi(x), accurate also for large x."""
    x = np.asarray(x, dtype=float)
    out = np.empty_like(x)
    big = x > _ASYMPTOTIC_X
    small = ~big
    if np.any(small):
        xs = x[small]
        out[small] = special.digamma(xs + h) - special.digamma(xs)
    if np.any(big):
        xb = x[big]
        xh = xb + h
        # psi(y) ~ ln y - 1/(2y) - 1/(12y^2) + 1/(120y^4) - 1/(252y^6)
        out[big] = (
            np.log1p(h / xb)
            - 0.5 * (1.0 / xh - 1.0 / xb)
            - (1.0 / xh**2 - 1.0 / xb**2) / 12.0
            + (1.0 / xh**4 - 1.0 / xb**4) / 120.0
            - (1.0 / xh**6 - 1.0 / xb**6) / 252.0
        )
    return out


def tail_integral(z, b, delta, lam):
    """Integral over x > 0 of (exp(-x z^lam) - exp(-x b^lam))^delta.

    ``z`` is an array of positive reals, ``b`` a scalar (``inf`` allowed)
    with ``b > z``.  Uses the Beta-function closed form
    ``B(delta z^lam / d, delta + 1) / d`` with ``d = b^lam - z^lam``.
    """
    z = np.asarray(z, dtype=float)
    zl = z**lam
    if math.isinf(b):
        return 1.0 / (delta * zl)
    big_l = lam * np.log(b / z)
    em1 = np.expm1(big_l)
    if delta == 1.0:
        return -np.expm1(-big_l) / zl
    x = delta / em1
    d = zl * em1
    if float(delta).is_integer() and delta <= 32:
        n = int(delta)
        prod = np.ones_like(x)
        for j in range(n + 1):
            prod = prod * (x + j)
        return math.factorial(n) / (d * prod)
    return np.exp(special.betaln(x, delta + 1.0)) / d


def tail_derivative(t, b, delta, lam):
    """Minus the t-derivative of ``tail_integral(t, b, delta, lam)``."""
    t = np.asarray(t, dtype=float)
    tl = t**lam
    if math.isinf(b):
        return lam / (delta * t * tl)
    big_l = lam * np.log(b / t)
    em1 = np.expm1(big_l)
    if delta == 1.0:
        return lam / (t * tl)
    x = delta / em1
    d = tl * em1
    if float(delta).is_integer() and delta <= 32:
        n = int(delta)
        prod = np.ones_like(x)
        harmonic = np.zeros_like(x)
        for j in range(n):
            prod = prod * (x + j)
            harmonic = harmonic + 1.0 / (x + j)
        beta = math.factorial(n - 1) / prod
    else:
        beta = np.exp(special.betaln(x, delta))
        harmonic = _digamma_diff(x, delta)
    return lam * tl / t * delta * beta * harmonic / d**2


def tail_quad(z, b, delta, lam, rtol=1e-11):
    """Adaptive Simpson evaluation of the tail integral.

    Independent of the closed forms: maps x = s u / (1 - u), s = z^-lam,
    onto (0, 1) and refines until the Richardson estimate of the local error
    drops below the budget.
    """
    zl = z**lam
    dl = math.inf if math.isinf(b) else b**lam - zl
    s = 1.0 / zl

    def g(u):
        if u <= 0.0 or u >= 1.0:
            return 0.0
        x = s * u / (1.0 - u)
        base = math.exp(-x * zl)
        if not math.isinf(dl):
            base *= -math.expm1(-x * dl)
        if base <= 0.0:
            return 0.0
        return base**delta * s / (1.0 - u) ** 2

    # coarse composite Simpson for the tolerance scale
    n = 256
    h = 1.0 / n
    coarse = g(0.0) + g(1.0)
    for i in range(1, n):
        coarse += (4.0 if i % 2 else 2.0) * g(i * h)
    coarse *= h / 3.0
    eps = max(abs(coarse), 1e-300) * rtol

    total = 0.0
    stack = []
    a0, b0 = 0.0, 1.0
    fa, fm, fb = g(a0), g(0.5), g(b0)
    whole = (b0 - a0) / 6.0 * (fa + 4.0 * fm + fb)
    stack.append((a0, b0, fa, fm, fb, whole, eps, 0))
    while stack:
        a, c, fa, fm, fc, whole, tol, depth = stack.pop()
        m = 0.5 * (a + c)
        lm = 0.5 * (a + m)
        rm = 0.5 * (m + c)
        flm, frm = g(lm), g(rm)
        left = (m - a) / 6.0 * (fa + 4.0 * flm + fm)
        right = (c - m) / 6.0 * (fm + 4.0 * frm + fc)
        delta_s = left + right - whole
        if depth >= 50 or abs(delta_s) <= 15.0 * tol:
            total += left + right + delta_s / 15.0
        else:
            stack.append((a, m, fa, flm, fm, left, 0.5 * tol, depth + 1))
            stack.append((m, c, fm, frm, fc, right, 0.5 * tol, depth + 1))
    return total


def kernel_matrix(x, y, lam, cutoff=None):
    """Dense kernel ``exp(-x_i y_j^lam)``.

    With ``cutoff`` (one value per column, ``inf`` allowed) the local kernel
    ``exp(-x_i y_j^lam) - exp(-x_i cutoff_j^lam)`` is returned instead.
    """
    x = np.asarray(x, dtype=float)
    ylam = np.asarray(y, dtype=float) ** lam
    out = np.exp(-np.outer(x, ylam))
    if cutoff is not None:
        clam = np.asarray(cutoff, dtype=float) ** lam
        finite = np.isfinite(clam)
        if np.any(finite):
            out[:, finite] -= np.exp(-np.outer(x, clam[finite]))
    return out


def tail_scalar(z, b, delta, lam):
    return float(tail_integral(float(z), b, delta, lam))


def tail_derivative_scalar(t, b, delta, lam):
    return float(tail_derivative(float(t), b, delta, lam))
