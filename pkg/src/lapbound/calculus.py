"""Integration and maximisation helpers shared by the bound modules.

Everything here works on the half-line in the logarithmic variable
``u = ln t``: weights and kernels are power-like, so a log scale keeps
quadrature and grid scans well conditioned from ``t ~ 1e-13`` to ``1e13``.
"""

from __future__ import annotations

import math
import warnings
from typing import Callable, Sequence

import numpy as np
from scipy import integrate

from .weights import PiecewisePower, Weight, mono_integral

inf = math.inf

QUAD_RTOL = 1e-12
SCAN_PER_UNIT = 12
SCAN_REACH = 30.0
GOLDEN_TOL = 1e-10
# quadrature ignores t outside exp(-+_LOG_CLIP): far beyond any weight feature
_LOG_CLIP = 575.0
_GOLD = 0.5 * (math.sqrt(5.0) - 1.0)


class IntegrationWarning(RuntimeWarning):
    pass


def quad(f: Callable[[float], float], s: float, e: float, points: Sequence[float] = (), rtol: float = QUAD_RTOL) -> float:
    """``integral_s^e f(t) dt`` for ``0 <= s < e <= inf`` in the variable ``ln t``."""
    if e <= s:
        return 0.0
    cuts = sorted({p for p in points if s < p < e})
    knots = [s, *cuts, e]
    total = 0.0
    for lo, hi in zip(knots[:-1], knots[1:]):
        ulo = -inf if lo == 0.0 else math.log(lo)
        uhi = inf if math.isinf(hi) else math.log(hi)

        def g(u):
            if not -_LOG_CLIP < u < _LOG_CLIP:
                return 0.0
            t = math.exp(u)
            try:
                val = f(t) * t
            except OverflowError:
                return inf
            return 0.0 if not math.isfinite(val) and val != inf else val

        with warnings.catch_warnings():
            warnings.simplefilter("ignore", integrate.IntegrationWarning)
            val, err = integrate.quad(g, ulo, uhi, epsabs=0.0, epsrel=rtol, limit=400)
        if math.isinf(val) or math.isnan(val):
            return inf
        total += val
    return total


def golden_max(phi: Callable[[float], float], a: float, b: float, tol: float = GOLDEN_TOL) -> tuple[float, float]:
    """Golden-section search for a maximum of a unimodal ``phi`` on ``[a, b]``."""
    c = b - _GOLD * (b - a)
    d = a + _GOLD * (b - a)
    fc, fd = phi(c), phi(d)
    while b - a > tol:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - _GOLD * (b - a)
            fc = phi(c)
        else:
            a, c, fc = c, d, fd
            d = a + _GOLD * (b - a)
            fd = phi(d)
    u = 0.5 * (a + b)
    return phi(u), u


def maximize(
    func: Callable[[np.ndarray], np.ndarray],
    s: float,
    e: float,
    ref_lo: float = 1.0,
    ref_hi: float = 1.0,
    limit_lo: float | None = None,
    limit_hi: float | None = None,
    top: int = 3,
) -> tuple[float, float]:
    """Supremum of a continuous function on ``(s, e)``.

    ``func`` is vectorised in ``t``.  Infinite or zero ends are scanned out to
    ``SCAN_REACH`` log-units beyond ``ref_lo``/``ref_hi``; the exact behaviour
    further out must be supplied as ``limit_lo``/``limit_hi``.  Returns
    ``(value, witness)``; the witness is ``0`` or ``inf`` when a limit wins.
    """
    tlo = s if s > 0.0 else min(ref_lo, e if math.isfinite(e) else ref_lo) * math.exp(-SCAN_REACH)
    thi = e if math.isfinite(e) else max(ref_hi, s) * math.exp(SCAN_REACH)
    ulo, uhi = math.log(tlo), math.log(thi)
    n = max(64, int((uhi - ulo) * SCAN_PER_UNIT))
    u = np.linspace(ulo, uhi, n + 1)
    with np.errstate(all="ignore"):
        vals = np.nan_to_num(np.asarray(func(np.exp(u)), dtype=float), nan=0.0, posinf=inf)
    best_val, best_t = -1.0, tlo
    if np.any(np.isinf(vals)):
        i = int(np.argmax(np.isinf(vals)))
        return inf, float(np.exp(u[i]))
    order = np.argsort(vals)[::-1]
    seen = 0
    for i in order:
        if seen >= top:
            break
        if 0 < i < n and not (vals[i] >= vals[i - 1] and vals[i] >= vals[i + 1]):
            continue
        seen += 1
        lo_u, hi_u = u[max(i - 1, 0)], u[min(i + 1, n)]

        def phi(x):
            with np.errstate(all="ignore"):
                v = float(np.asarray(func(np.array([math.exp(x)])))[0])
            return v if math.isfinite(v) else (-1.0 if math.isnan(v) else v)

        val, where = golden_max(phi, lo_u, hi_u)
        for cand_v, cand_u in ((val, where), (vals[i], u[i])):
            if cand_v > best_val:
                best_val, best_t = float(cand_v), math.exp(cand_u)
    if limit_lo is not None and limit_lo > best_val:
        best_val, best_t = limit_lo, 0.0
    if limit_hi is not None and limit_hi > best_val:
        best_val, best_t = limit_hi, inf
    return max(best_val, 0.0), best_t


class _LogFactor:
    __slots__ = ("log",)

    def __init__(self, log: float):
        self.log = log


def _piece_primitive(cr: float, g: float, s: float):
    """``t -> cr * integral_s^t y^(g-1) dy`` as a scalar function."""
    if g == 0.0:
        return lambda t: cr * math.log(t / s)
    if s == 0.0:
        return lambda t: cr * t**g / g
    return lambda t: cr * s**g * math.expm1(g * math.log(t / s)) / g


def integrate_primitive(
    weight: Weight,
    rho: float,
    kappa: float,
    mu: float,
    a: float = 0.0,
    b: float = inf,
    alpha: float = 0.0,
    extra: Callable[[float], float] | None = None,
    points: Sequence[float] = (),
    log_extra: Callable[[float], float] | None = None,
) -> float:
    """``integral_a^b t^alpha F(t)^kappa v(t)^mu extra(t) dt``, ``F(t) = integral_a^t v^rho``.

    Closed form on pieces where ``F`` is a pure monomial (pieces starting at 0)
    or constant; adaptive quadrature elsewhere.  Divergence is returned as
    ``inf``.  Products ``0 * inf`` count as 0.  ``log_extra`` (the logarithm
    of the extra factor) avoids overflow when that factor is huge where the
    rest is tiny.
    """
    if log_extra is not None:
        if extra is not None:
            raise ValueError("give extra or log_extra, not both")

        def extra(t):
            return _LogFactor(log_extra(t))

    total = 0.0
    acc = 0.0
    for p, s, e in weight.segments(a, b):
        c, beta = p.coeff, p.exp
        if mu > 0.0 and c == 0.0:
            continue
        g = beta * rho + 1.0
        cr = c**rho if c else 0.0
        piece_f = mono_integral(cr, beta * rho, s, e)
        if math.isinf(acc):
            return inf
        if extra is None and c == 0.0:
            # F constant on this piece
            if acc == 0.0:
                if kappa > 0.0:
                    part = 0.0
                elif kappa == 0.0:
                    part = mono_integral(1.0, alpha, s, e)
                else:
                    part = inf
            else:
                part = mono_integral(acc**kappa, alpha, s, e)
        elif extra is None and s == 0.0 and acc == 0.0:
            if g <= 0.0:
                return inf
            part = mono_integral((cr / g) ** kappa * (c**mu if mu else 1.0), g * kappa + beta * mu + alpha, s, e)
        else:
            if math.isinf(e) and extra is None and c > 0.0:
                lead = alpha + beta * mu + (g * kappa if g > 0.0 else 0.0)
                if lead >= -1.0:
                    return inf
            prim = _piece_primitive(cr, g, s) if c else (lambda t: 0.0)
            cmu = c**mu if mu else 1.0
            acc0 = acc

            def h(t, prim=prim, cmu=cmu, acc0=acc0, beta=beta):
                big_f = acc0 + prim(t)
                if big_f <= 0.0:
                    fk = 0.0 if kappa > 0.0 else (1.0 if kappa == 0.0 else inf)
                else:
                    fk = big_f**kappa
                vm = cmu * t ** (beta * mu) if mu else 1.0
                if vm == 0.0:
                    return 0.0
                val = t**alpha * fk * vm
                if val == 0.0:
                    return 0.0
                if extra is not None:
                    ex = extra(t)
                    if isinstance(ex, _LogFactor):
                        if ex.log == -inf:
                            return 0.0
                        return math.exp(math.log(val) + ex.log)
                    val = 0.0 if ex == 0.0 else val * ex
                return val

            part = quad(h, s, e, points=points)
        total += part
        if math.isinf(total):
            return inf
        acc += piece_f
    return total


def sup_scaled_primitive(weight: Weight, rho: float, a_exp: float, kappa: float) -> tuple[float, float]:
    """Exact ``sup_t t^a_exp (integral_0^t v^rho)^kappa`` with a witness point.

    Requires ``a_exp < 0 < kappa``.  On each piece the objective is
    ``t^a (D + E t^g)^kappa`` whose single critical point solves a power
    equation; breakpoints and the limits at ``0`` and ``inf`` complete the
    candidate set.
    """
    lim0, liminf = primitive_limits(weight, rho, a_exp, kappa)
    best, where = lim0, 0.0
    if liminf > best:
        best, where = liminf, inf
    acc = 0.0

    def value(t, acc_here, cr, g, s):
        big_f = acc_here + (_piece_primitive(cr, g, s)(t) if cr else 0.0)
        return t**a_exp * big_f**kappa if big_f > 0 else 0.0

    for p, s, e in weight.segments(0.0, inf):
        c, beta = p.coeff, p.exp
        cr = c**rho if c else 0.0
        g = beta * rho + 1.0
        if math.isinf(acc):
            return inf, s
        cands = []
        if s > 0.0:
            cands.append(s)
        if math.isfinite(e):
            cands.append(e)
        if c > 0.0:
            if g == 0.0:
                dconst = acc - cr * math.log(s) if s > 0 else -inf
                if math.isfinite(dconst):
                    cands.append(math.exp(-kappa / a_exp - dconst / cr))
            else:
                big_e = cr / g
                dconst = acc - big_e * s**g if s > 0 else acc
                denom = big_e * (a_exp + kappa * g)
                if denom != 0.0:
                    rhs = -a_exp * dconst / denom
                    if rhs > 0.0:
                        cands.append(rhs ** (1.0 / g))
        for t in cands:
            if s <= t <= e and 0.0 < t < inf:
                val = value(t, acc, cr, g, s)
                if val > best:
                    best, where = val, t
        acc += mono_integral(cr, beta * rho, s, e)
    return best, where


def primitive_limits(weight: Weight, rho: float, a_exp: float, kappa: float) -> tuple[float, float]:
    """Limits at ``0`` and ``inf`` of ``t^a_exp (integral_0^t v^rho)^kappa``, ``a_exp < 0 < kappa``."""
    first = weight.pieces[0]
    if first.coeff == 0.0:
        lim0 = 0.0
    else:
        g = first.exp * rho + 1.0
        if g <= 0.0:
            lim0 = inf
        else:
            ex = a_exp + g * kappa
            lim0 = 0.0 if ex > 0 else ((first.coeff**rho / g) ** kappa if ex == 0 else inf)
    last = weight.pieces[-1]
    total = weight.integral(0.0, inf, rho=rho) if rho > 0 else 0.0
    if last.coeff == 0.0:
        liminf = 0.0 if math.isfinite(total) else inf
    else:
        g = last.exp * rho + 1.0
        if g <= 0.0:
            liminf = 0.0
        else:
            ex = a_exp + g * kappa
            liminf = 0.0 if ex < 0 else ((last.coeff**rho / g) ** kappa if ex == 0 else inf)
    return lim0, liminf


def monomial_limits(f: PiecewisePower, a_exp: float) -> tuple[float, float]:
    """Limits at ``0`` and ``inf`` of ``t^a_exp f(t)`` for a piecewise power ``f``."""
    return f.times_power(a_exp).limit_at_zero(), f.times_power(a_exp).limit_at_inf()
