"""Two-sided bounds for the local norm ``K(I) = ||L_I||_{L^p(I) -> L^q}``.

``L_I`` has kernel ``exp(-x y^lam) - exp(-x b^lam)`` on ``I = (a, b)``.
Every quantity below is built from the local primitive
``F_a(t) = integral_a^t v^p'``, the running supremum ``vbar_a`` and the kernel
tail integral ``T(t, b; delta)``.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from . import kernel
from .calculus import integrate_primitive, maximize, primitive_limits, quad, sup_scaled_primitive
from .kernel import SpaceParams
from .weights import Weight

inf = math.inf


class RegimeError(ValueError):
    pass


@dataclass(frozen=True)
class Interval:
    a: float
    b: float

    def __post_init__(self):
        if not (0.0 <= self.a < self.b):
            raise ValueError(f"need 0 <= a < b <= inf, got ({self.a}, {self.b})")

    @property
    def finite(self) -> bool:
        return math.isfinite(self.b)


def _as_interval(I) -> Interval:
    return I if isinstance(I, Interval) else Interval(float(I[0]), float(I[1]))


@dataclass(frozen=True)
class GammaConstants:
    alpha0: float
    beta0: float | None
    gamma0: float | None = None
    gamma0_bar: float | None = None
    gamma1: float | None = None
    gamma1_bar: float | None = None
    gamma2: float | None = None
    gamma2_bar: float | None = None
    gamma3_bar: float | None = None
    gamma4_bar: float | None = None

    def to_dict(self) -> dict:
        return asdict(self)


def gamma_constants(params: SpaceParams) -> GammaConstants:
    p, q, pp, r = params.p, params.q, params.p_prime, params.r
    if math.isinf(q):
        raise RegimeError("local constants need finite q")
    alpha0 = max(2.0, 2.0 ** (q - 1.0))
    if q > 2.0:
        beta0 = 2.0 ** (q - 1.0)
    elif q > 1.0:
        beta0 = 2.0 / (q - 1.0)
    else:
        beta0 = None
    vals: dict = {}
    if q > 1.0:
        qp = params.q_prime
        inv_pp = 0.0 if math.isinf(pp) else 1.0 / pp
        vals["gamma0"] = vals["gamma1"] = alpha0 ** (1.0 / q) * q ** (-1.0 / q)
        vals["gamma0_bar"] = beta0 ** (1.0 / q) * qp**inv_pp
        vals["gamma1_bar"] = beta0 ** (1.0 / q) * qp ** (-1.0 / q)
        if r is not None and math.isfinite(p):
            vals["gamma2"] = alpha0 ** (1.0 / q) * (q * pp / r) ** (1.0 / qp)
            vals["gamma2_bar"] = beta0 ** (1.0 / q) * pp ** (1.0 / qp)
    if q < 1.0:
        if p > 1.0 and math.isfinite(p):
            vals["gamma3_bar"] = (r / q) ** (1.0 / r - 1.0) * p ** (1.0 / p) * pp ** (1.0 / pp) * q ** (-1.0 / q)
        vals["gamma4_bar"] = (1.0 - q) ** (-(1.0 - q) / q)
    return GammaConstants(alpha0, beta0, **vals)


# -- helpers ---------------------------------------------------------------

def _T(t, b, delta, lam):
    """Tail integral, 0 at and beyond ``b``."""
    if isinstance(t, float):
        return kernel.tail_scalar(t, b, delta, lam) if 0.0 < t < b else 0.0
    t = np.asarray(t, dtype=float)
    ok = (t > 0.0) & (t < b)
    if np.ndim(t) == 0:
        return float(kernel.tail_integral(t, b, delta, lam)) if ok else 0.0
    out = np.zeros_like(t)
    if np.any(ok):
        out[ok] = kernel.tail_integral(t[ok], b, delta, lam)
    return out


def _dT(t, b, delta, lam):
    return kernel.tail_derivative_scalar(t, b, delta, lam) if 0.0 < t < b else 0.0


def _logT(t, b, delta, lam):
    """``log T``; where ``T`` overflows its small-``t`` asymptote ``t^-lam / delta`` is used."""
    v = _T(float(t), b, delta, lam)
    if v == 0.0:
        return -inf
    if math.isfinite(v):
        return math.log(v)
    return -math.log(delta) - lam * math.log(t)


def _logdT(t, b, delta, lam):
    """``log(-dT/dt)`` with the asymptote ``lam t^(-lam-1) / delta`` on overflow."""
    v = _dT(float(t), b, delta, lam)
    if v == 0.0:
        return -inf
    if math.isfinite(v):
        return math.log(v)
    return math.log(lam / delta) - (lam + 1.0) * math.log(t)


def _end_pieces(w: Weight, a: float, b: float):
    """First piece if it touches 0 and last piece if it reaches infinity (nonzero ones only)."""
    segs = [(p, s, e) for p, s, e in w.segments(a, b) if p.coeff > 0.0]
    if not segs:
        return None, None
    (p0, s0, _), (p1, _, e1) = segs[0], segs[-1]
    return (p0 if s0 == 0.0 else None, p1 if math.isinf(e1) else None)


def _power_diverges(first_exp, last_exp) -> bool:
    """Divergence of ``integral t^e dt`` near 0 (``first_exp``) or infinity (``last_exp``)."""
    return (first_exp is not None and first_exp <= -1.0) or (last_exp is not None and last_exp >= -1.0)


def _ref_points(w: Weight, I: Interval) -> tuple[float, float]:
    inner = [x for x in w.breakpoints if I.a < x < I.b]
    lo = I.a if I.a > 0 else (min(inner) if inner else (I.b if I.finite else 1.0))
    hi = I.b if I.finite else (max(inner) if inner else max(lo, 1.0))
    return lo, hi


def _points(w: Weight, I: Interval) -> list:
    return [x for x in w.breakpoints if I.a < x < I.b]


def _need(params: SpaceParams, *regimes):
    if params.local_regime not in regimes:
        raise RegimeError(f"quantity not defined for regime {params.local_regime} (p={params.p}, q={params.q})")


# -- local quantities ------------------------------------------------------

def A0(delta: float, I, params: SpaceParams, w: Weight) -> float:
    """``sup_{t in I} F_a(t)^(1/p') T(t, b; delta)^(1/q)``."""
    I = _as_interval(I)
    pp, q, lam = params.p_prime, params.q, params.lam
    if math.isinf(pp):
        raise RegimeError("A0 needs p > 1")
    a, b = I.a, I.b
    if w.restricted(a, b).is_zero():
        return 0.0
    if a == 0.0 and not I.finite:
        # T = 1/(delta t^lam): the global power sup in closed form
        val, _ = sup_scaled_primitive(w, pp, -lam * pp / q, 1.0)
        return 0.0 if val == 0.0 else delta ** (-1.0 / q) * (inf if math.isinf(val) else val ** (1.0 / pp))

    def func(t):
        big_f = w.primitive(pp, t, a)
        with np.errstate(all="ignore"):
            return np.where(big_f > 0.0, big_f ** (1.0 / pp) * _T(t, b, delta, lam) ** (1.0 / q), 0.0)

    lim_lo = None
    lim_hi = None
    if a == 0.0:
        lo, _ = primitive_limits(w, pp, -lam * pp / q, 1.0)
        lim_lo = 0.0 if lo == 0.0 else delta ** (-1.0 / q) * (inf if math.isinf(lo) else lo ** (1.0 / pp))
    if not I.finite:
        lim_hi = _tail_limit_local(w, params, a, delta)
    ref_lo, ref_hi = _ref_points(w, I)
    val, _ = maximize(func, a, b, ref_lo, ref_hi, lim_lo, lim_hi)
    return val


def _tail_limit_local(w: Weight, params: SpaceParams, a: float, delta: float) -> float:
    """``lim_{t->inf} F_a(t)^(1/p') (delta t^lam)^(-1/q)``."""
    pp, q, lam = params.p_prime, params.q, params.lam
    last = w.pieces[-1]
    total = w.integral(a, inf, rho=pp)
    if last.coeff == 0.0:
        return 0.0 if math.isfinite(total) else inf
    g = last.exp * pp + 1.0
    if g <= 0.0:
        return 0.0
    ex = -lam / q + g / pp
    if ex < 0.0:
        return 0.0
    if ex > 0.0:
        return inf
    return (last.coeff**pp / g) ** (1.0 / pp) * delta ** (-1.0 / q)


def _stieltjes_diverges(w: Weight, params: SpaceParams, a: float, b: float) -> bool:
    """Endpoint test for ``integral F_a^(r/p') d[-T^(r/q)]`` on ``(a, b)``.

    Near 0 and near infinity ``T ~ t^-lam / delta``, so the integrand is a
    power ``t^(r (g/p' - lam/q) - 1)`` with ``g`` the growth exponent of ``F``.
    """
    pp, q, lam = params.p_prime, params.q, params.lam
    loc = w.restricted(a, b)
    if a == 0.0:
        first = loc.pieces[0]
        if first.coeff > 0.0 and first.lo == 0.0:
            g = first.exp * pp + 1.0
            if g <= 0.0 or g / pp <= lam / q:
                return True
    if math.isinf(b):
        last = loc.pieces[-1]
        if last.coeff > 0.0 and math.isinf(last.hi):
            g = last.exp * pp + 1.0
            if g > 0.0 and g / pp >= lam / q:
                return True
    return False


def B0(delta: float, I, params: SpaceParams, w: Weight, by_parts: bool = False) -> float:
    """``(integral_I F_a^(r/p') d[-T(t, b; delta)^(r/q)])^(1/r)``.

    The Stieltjes measure is ``(r/q) T^(r/q - 1) (-dT/dt) dt`` with the exact
    derivative of the closed-form tail.  ``by_parts`` integrates
    ``T^(r/q) d[F_a^(r/p')]`` instead, an independent evaluation path.
    """
    I = _as_interval(I)
    pp, q, lam, r = params.p_prime, params.q, params.lam, params.r
    if r is None or math.isinf(pp):
        raise RegimeError("B0 needs 1 < p and q < p")
    a, b = I.a, I.b
    if w.restricted(a, b).is_zero():
        return 0.0
    if _stieltjes_diverges(w, params, a, b):
        return inf
    pts = _points(w, I)
    if by_parts:
        def log_extra(t):
            return math.log(r / pp) + (r / q) * _logT(t, b, delta, lam)

        val = integrate_primitive(w, pp, r / pp - 1.0, pp, a, b, log_extra=log_extra, points=pts)
    else:
        def log_extra(t):
            lt = _logT(t, b, delta, lam)
            if lt == -inf:
                return -inf
            return math.log(r / q) + (r / q - 1.0) * lt + _logdT(t, b, delta, lam)

        val = integrate_primitive(w, pp, r / pp, 0.0, a, b, log_extra=log_extra, points=pts)
    return inf if math.isinf(val) else val ** (1.0 / r)


def _piece_sup_A1(c: float, beta: float, s: float, e: float, lam: float, q: float, b: float) -> float:
    """``sup_{s<t<e} c t^beta (t^-lam - b^-lam)^(1/q)`` in closed form."""
    if c == 0.0:
        return 0.0
    if math.isinf(c):
        return inf
    big_b = 0.0 if math.isinf(b) else b ** (-lam)

    def f(t):
        if t == 0.0:
            if beta - lam / q > 0.0:
                return 0.0
            return c if beta - lam / q == 0.0 else inf
        if math.isinf(t):
            if math.isinf(b):
                ex = beta - lam / q
                return 0.0 if ex < 0.0 else (c if ex == 0.0 else inf)
            return 0.0
        d = t ** (-lam) - big_b
        return c * t**beta * max(d, 0.0) ** (1.0 / q)

    cands = [s, e]
    if beta > lam / q and big_b > 0.0:
        u = beta * big_b / (beta - lam / q)
        t_star = u ** (-1.0 / lam)
        if s < t_star < e:
            cands.append(t_star)
    elif math.isinf(b) and beta == lam / q:
        cands.append(e)
    return max(f(t) for t in cands)


def A1(I, params: SpaceParams, w: Weight) -> float:
    """``esup_{t in I} vbar_a(t) (t^-lam - b^-lam)^(1/q)``."""
    I = _as_interval(I)
    q, lam = params.q, params.lam
    run = w.restricted(I.a, I.b).running_esup(I.a)
    best = 0.0
    for p, s, e in run.segments(I.a, I.b):
        best = max(best, _piece_sup_A1(p.coeff, p.exp, s, e, lam, q, I.b))
    return best


def B1(I, params: SpaceParams, w: Weight) -> float:
    """``(integral_I (t^-lam - b^-lam)^p' v^p')^(1/p')``."""
    I = _as_interval(I)
    pp, lam = params.p_prime, params.lam
    if math.isinf(pp):
        raise RegimeError("B1 needs p > 1")
    if not I.finite:
        val = w.integral(I.a, inf, rho=pp, alpha=-lam * pp)
    else:
        first, _ = _end_pieces(w, I.a, I.b)
        if _power_diverges(None if first is None else pp * (first.exp - lam), None):
            return inf
        bl = I.b ** (-lam)

        def log_extra(t):
            d = 1.0 - bl * t**lam
            return -inf if d <= 0.0 else pp * (-lam * math.log(t) + math.log(d))

        val = integrate_primitive(w, 1.0, 0.0, pp, I.a, I.b, log_extra=log_extra, points=_points(w, I))
    return inf if math.isinf(val) else val ** (1.0 / pp)


def B2(I, params: SpaceParams, w: Weight) -> float:
    """``(integral_I v^p'(y) T(y, b; q)^(p'/q) dy)^(1/p')``."""
    I = _as_interval(I)
    pp, q, lam = params.p_prime, params.q, params.lam
    first, last = _end_pieces(w, I.a, I.b)
    e0 = None if first is None else pp * (first.exp - lam / q)
    e1 = None if last is None else pp * (last.exp - lam / q)
    if _power_diverges(e0, e1):
        return inf

    def log_extra(t):
        return (pp / q) * _logT(t, I.b, q, lam)

    val = integrate_primitive(w, 1.0, 0.0, pp, I.a, I.b, log_extra=log_extra, points=_points(w, I))
    return inf if math.isinf(val) else val ** (1.0 / pp)


def B3(I, params: SpaceParams, w: Weight) -> float:
    """``(integral_I vbar_a^(q/(1-q)) d[-T(t, b; q)^(1/(1-q))])^((1-q)/q)``."""
    I = _as_interval(I)
    q, lam = params.q, params.lam
    if q >= 1.0:
        raise RegimeError("B3 needs q < 1")
    kap = 1.0 / (1.0 - q)
    run = w.restricted(I.a, I.b).running_esup(I.a)
    if run.is_zero():
        return 0.0
    first, last = _end_pieces(run, I.a, I.b)
    e0 = None if first is None else kap * (first.exp * q - lam) - 1.0
    e1 = None if last is None else kap * (last.exp * q - lam) - 1.0
    if _power_diverges(e0, e1):
        return inf
    total = 0.0
    for p, s, e in run.segments(I.a, I.b):
        if p.coeff == 0.0:
            continue
        if math.isinf(p.coeff):
            return inf

        def g(t, p=p):
            lt = _logT(t, I.b, q, lam)
            if lt == -inf:
                return 0.0
            lv = q * kap * (math.log(p.coeff) + p.exp * math.log(t))
            return kap * math.exp(lv + (kap - 1.0) * lt + _logdT(t, I.b, q, lam))

        total += quad(g, s, e)
        if math.isinf(total):
            return inf
    return total ** ((1.0 - q) / q)


def B4(I, params: SpaceParams, w: Weight) -> float:
    """``esup_{t in I} vbar_a(t) T(t, b; q)^(1/q)``."""
    I = _as_interval(I)
    q, lam = params.q, params.lam
    run = w.restricted(I.a, I.b).running_esup(I.a)
    if run.is_zero():
        return 0.0
    if any(math.isinf(p.coeff) for p, _, _ in run.segments(I.a, I.b)):
        return inf

    def func(t):
        with np.errstate(all="ignore"):
            vals = run(t)
            return np.where(vals > 0.0, vals * _T(t, I.b, q, lam) ** (1.0 / q), 0.0)

    lim_hi = None
    if not I.finite:
        last = run.pieces[-1]
        ex = last.exp - lam / q
        lim_hi = 0.0 if last.coeff == 0.0 or ex < 0.0 else (last.coeff * q ** (-1.0 / q) if ex == 0.0 else inf)
    lim_lo = None
    if I.a == 0.0:
        first = run.pieces[0]
        ex = first.exp - lam / q
        lim_lo = 0.0 if first.coeff == 0.0 or ex > 0.0 else (first.coeff * q ** (-1.0 / q) if ex == 0.0 else inf)
    ref_lo, ref_hi = _ref_points(w, I)
    best = 0.0
    # the running sup jumps at breakpoints: maximise piece by piece
    for p, s, e in run.segments(I.a, I.b):
        if p.coeff == 0.0:
            continue
        lo_l = lim_lo if s == 0.0 else None
        hi_l = lim_hi if math.isinf(e) else None
        val, _ = maximize(func, s, e, max(ref_lo, s) if s > 0 else ref_lo, ref_hi, lo_l, hi_l)
        best = max(best, val)
        for t in (s, e):
            if 0.0 < t < inf and t < I.b:
                best = max(best, float(p.coeff * t**p.exp) * float(_T(t, I.b, q, lam)) ** (1.0 / q))
    return best


# -- sandwich --------------------------------------------------------------

def K_bounds(I, params: SpaceParams, w: Weight) -> tuple[float, float]:
    """``(lower, upper)`` with ``lower <= K(I) <= upper``."""
    return K_report(I, params, w)["bounds"]


def K_report(I, params: SpaceParams, w: Weight) -> dict:
    I = _as_interval(I)
    regime = params.local_regime
    if regime is None:
        raise RegimeError("local norm bounds need 1 <= p < inf and 0 < q < inf")
    g = gamma_constants(params)
    q = params.q
    detail: dict = {"regime": regime, "interval": [I.a, I.b]}
    if regime == "p_le_q":
        a_q, a_1 = A0(q, I, params, w), A0(1.0, I, params, w)
        lo, up = _mul(g.gamma0, a_q), _mul(g.gamma0_bar, a_1)
        detail.update(A0_q=a_q, A0_1=a_1, lower_const=g.gamma0, upper_const=g.gamma0_bar)
    elif regime == "p1_le_q":
        a1 = A1(I, params, w)
        if q == 1.0:
            lo = up = a1
            detail.update(A1=a1, lower_const=1.0, upper_const=1.0, exact=True)
        else:
            lo, up = _mul(g.gamma1, a1), _mul(g.gamma1_bar, a1)
            detail.update(A1=a1, lower_const=g.gamma1, upper_const=g.gamma1_bar)
    elif regime == "q_lt_p":
        b_q, b_1 = B0(q, I, params, w), B0(1.0, I, params, w)
        lo, up = _mul(g.gamma2, b_q), _mul(g.gamma2_bar, b_1)
        detail.update(B0_q=b_q, B0_1=b_1, lower_const=g.gamma2, upper_const=g.gamma2_bar)
    elif regime == "q1_lt_p":
        b1 = B1(I, params, w)
        lo = up = b1
        detail.update(B1=b1, lower_const=1.0, upper_const=1.0, exact=True)
    elif regime == "q_lt1_lt_p":
        b2, b0 = B2(I, params, w), B0(q, I, params, w)
        lo, up = b2, _mul(g.gamma3_bar, b0)
        detail.update(B2=b2, B0_q=b0, lower_const=1.0, upper_const=g.gamma3_bar)
    else:
        b4, b3 = B4(I, params, w), B3(I, params, w)
        lo, up = b4, _mul(g.gamma4_bar, b3)
        detail.update(B4=b4, B3=b3, lower_const=1.0, upper_const=g.gamma4_bar)
    detail["bounds"] = (lo, up)
    return detail


def K_upper(I, params: SpaceParams, w: Weight) -> float:
    """Upper sandwich value only (cheaper: skips the lower quantity)."""
    I = _as_interval(I)
    regime = params.local_regime
    g = gamma_constants(params)
    if regime == "p_le_q":
        return _mul(g.gamma0_bar, A0(1.0, I, params, w))
    if regime == "p1_le_q":
        a1 = A1(I, params, w)
        return a1 if params.q == 1.0 else _mul(g.gamma1_bar, a1)
    if regime == "q_lt_p":
        return _mul(g.gamma2_bar, B0(1.0, I, params, w))
    if regime == "q1_lt_p":
        return B1(I, params, w)
    if regime == "q_lt1_lt_p":
        return _mul(g.gamma3_bar, B0(params.q, I, params, w))
    if regime == "q_lt1_p1":
        return _mul(g.gamma4_bar, B3(I, params, w))
    raise RegimeError("local norm bounds need 1 <= p < inf and 0 < q < inf")


def _mul(c, x):
    if x == 0.0 or c == 0.0:
        return 0.0
    return c * x
