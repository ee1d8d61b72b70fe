"""Global boundedness and compactness criteria with two-sided norm bounds.

``norm_criterion`` dispatches on the exponent pair ``(p, q)``, evaluates the
governing weight functional exactly (closed-form sups and power integrals on
the piecewise-power family) and multiplies it by the matching pair of
constants.  The S_2 identities at the end give an exact cross-check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .calculus import integrate_primitive, primitive_limits, quad, sup_scaled_primitive
from .dyadic import block_series, end_exponents, natural_range
from .kernel import SpaceParams, derived_params
from .weights import Weight

inf = math.inf

BOUNDED = "bounded"
UNBOUNDED = "unbounded"
ONE_SIDED = "undecided-one-sided"

COMPACT = "compact"
NOT_COMPACT = "not-compact"
NOT_APPLICABLE = "not-applicable"
UNDECIDED = "undecided"
EQUIVALENT = "equivalent-to-boundedness"
NEVER = "never-compact"


class CriterionError(ValueError):
    pass


@dataclass
class BoundReport:
    quantity_name: str
    value: float
    lower_const: float
    upper_const: float
    lower_bound: float
    upper_bound: float
    decision: str
    compactness: str
    case: str
    criterion: str = ""
    witness: float | None = None
    aux: dict = field(default_factory=dict)
    note: str = ""

    def to_dict(self) -> dict:
        return {
            "quantity_name": self.quantity_name,
            "value": self.value,
            "lower_const": self.lower_const,
            "upper_const": self.upper_const,
            "lower_bound": self.lower_bound,
            "upper_bound": self.upper_bound,
            "decision": self.decision,
            "compactness": self.compactness,
            "case": self.case,
            "criterion": self.criterion,
            "witness": self.witness,
            "aux": dict(self.aux),
            "note": self.note,
        }


def _mul(c: float, x: float) -> float:
    """``c * x`` with ``0 * inf = 0``."""
    if x == 0.0 or c == 0.0:
        return 0.0
    return c * x


def _root(x: float, k: float) -> float:
    return inf if math.isinf(x) else x ** (1.0 / k)


# -- governing functionals -------------------------------------------------

def A_sup(params: SpaceParams, w: Weight) -> tuple[float, float]:
    """``sup_t t^(-lam/q) (integral_0^t v^p')^(1/p')`` and a witness ``t``."""
    pp, q, lam = params.p_prime, params.q, params.lam
    if w.is_zero():
        return 0.0, 1.0
    val, where = sup_scaled_primitive(w, pp, -lam * pp / q, 1.0)
    return _root(val, pp), where


def A_limits(params: SpaceParams, w: Weight) -> tuple[float, float]:
    """Limits of ``A(t)`` at ``0`` and ``inf`` from the end-piece exponents."""
    pp = params.p_prime
    lo, hi = primitive_limits(w, pp, -params.lam * pp / params.q, 1.0)
    return _root(lo, pp), _root(hi, pp)


def B_p(params: SpaceParams, w: Weight) -> float:
    """``(integral y^(-lam p') v^p')^(1/p')``: exact norm into ``L^1``."""
    pp = params.p_prime
    return _root(w.integral(rho=pp, alpha=-params.lam * pp), pp)


def B_L(params: SpaceParams, w: Weight) -> float:
    """``(integral t^(-lam r/q) F(t)^(r/q') v^p'(t) dt)^(1/r)``, ``F = integral_0^t v^p'``."""
    pp, q, r, lam = params.p_prime, params.q, params.r, params.lam
    kappa = r * (1.0 - 1.0 / q)
    val = integrate_primitive(w, pp, kappa, pp, alpha=-lam * r / q)
    return _root(val, r)


def B_q_norm(params: SpaceParams, w: Weight) -> float:
    """``(integral y^(-lam p'/q) v^p')^(1/p')``."""
    pp = params.p_prime
    return _root(w.integral(rho=pp, alpha=-params.lam * pp / params.q), pp)


def B_q_esup(params: SpaceParams, w: Weight) -> tuple[float, float]:
    """``esup_t t^(-lam/q) esup_{0<x<t} v(x)`` with a witness."""
    run = w.running_esup(0.0).times_power(-params.lam / params.q)
    return run.sup_with_witness(0.0, inf)


def B_q_limits(params: SpaceParams, w: Weight) -> tuple[float, float]:
    run = w.running_esup(0.0).times_power(-params.lam / params.q)
    return run.limit_at_zero(), run.limit_at_inf()


def B_q_prime(params: SpaceParams, w: Weight) -> float:
    """``(integral t^(-lam/(1-q)-1) vbar_0(t)^(q/(1-q)) dt)^((1-q)/q)`` for ``q < 1``."""
    q, lam = params.q, params.lam
    run = w.running_esup(0.0)
    val = run.integral(rho=q / (1.0 - q), alpha=-lam / (1.0 - q) - 1.0)
    return _root(val, q / (1.0 - q))


def C_q(params: SpaceParams, w: Weight) -> float:
    """``(integral t^-lam F_1(t)^(q-1) v(t) dt)^(1/q)``, ``F_1 = integral_0^t v``."""
    q = params.q
    val = integrate_primitive(w, 1.0, q - 1.0, 1.0, alpha=-params.lam)
    return _root(val, q)


def _alpha0_min(q: float) -> float:
    return min(2.0, 2.0 ** (q - 1.0))


def _beta0(q: float) -> float:
    return 2.0 / (q - 1.0) if q <= 2.0 else 2.0 ** (q - 1.0)


# -- main dispatcher -------------------------------------------------------

def norm_criterion(params: SpaceParams, w: Weight) -> BoundReport:
    """Two-sided bound for the ``L^p -> L^q`` norm with a bounded/compact verdict."""
    p, q, pp, lam = params.p, params.q, params.p_prime, params.lam
    case = params.case
    aux: dict = {}

    if case == "i":
        a_val, where = A_sup(params, w)
        qp = params.q_prime
        lo_c = q ** (-2.0 / q) * _alpha0_min(q) ** (1.0 / q)
        if q <= 2.0:
            up_c = 2.0 ** (1.0 / q) * qp ** (1.0 / pp) * (q - 1.0) ** (-1.0 / q)
        else:
            up_c = 2.0 ** (1.0 / qp) * qp ** (1.0 / pp)
        lim0, liminf = A_limits(params, w)
        aux.update(limit_at_0=lim0, limit_at_inf=liminf)
        bounded = math.isfinite(a_val)
        comp = _two_limit_verdict(bounded, lim0, liminf)
        return BoundReport("A_L", a_val, lo_c, up_c, _mul(lo_c, a_val), _mul(up_c, a_val),
                           BOUNDED if bounded else UNBOUNDED, comp, case,
                           "p<=q power-sup criterion", where, aux)

    if case == "ii":
        if q == 1.0:
            val = B_p(params, w)
            bounded = math.isfinite(val)
            return BoundReport("B_p", val, 1.0, 1.0, val, val, BOUNDED if bounded else UNBOUNDED,
                               COMPACT if bounded else NOT_APPLICABLE, case, "q=1<p exact norm", None, aux,
                               "norm equals B_p; boundedness is equivalent to compactness")
        val = B_L(params, w)
        r, qp = params.r, params.q_prime
        lo_c = (_alpha0_min(q) / q) ** (1.0 / q) * (pp * q / r) ** (1.0 / qp)
        if q <= 2.0:
            up_c = 2.0 ** (1.0 / q) * pp ** (1.0 / qp) * (q - 1.0) ** (-1.0 / q)
        else:
            up_c = 2.0 ** (1.0 / qp) * pp ** (1.0 / qp)
        bounded = math.isfinite(val)
        return BoundReport("B_L", val, lo_c, up_c, _mul(lo_c, val), _mul(up_c, val),
                           BOUNDED if bounded else UNBOUNDED, COMPACT if bounded else NOT_APPLICABLE,
                           case, "q<p integral criterion", None, aux,
                           "boundedness is equivalent to compactness")

    if case == "iii":
        upper_q = B_L(params, w)
        lower_q = B_q_norm(params, w)
        r = params.r
        lo_c = q ** (-1.0 / q)
        up_c = p ** (1.0 / p) * pp ** (1.0 - 1.0 / q) * q ** (-2.0 / q) * r ** (1.0 / r)
        aux.update(B_L=upper_q, B_q_norm=lower_q)
        return _one_sided(params, "B_L", upper_q, lower_q, lo_c, up_c, "q<1<p integral criterion", aux)

    if case == "iv":
        upper_q = B_q_prime(params, w)
        lower_q, where = B_q_esup(params, w)
        lo_c = q ** (-1.0 / q)
        up_c = lam ** ((1.0 - q) / q) * q ** (-2.0 / q) * (1.0 - q) ** (-(1.0 - q) / q)
        aux.update(B_q_prime=upper_q, esup_B_q=lower_q, esup_witness=where)
        return _one_sided(params, "B_q_prime", upper_q, lower_q, lo_c, up_c, "q<1=p esup criterion", aux)

    if case == "v":
        val, where = B_q_esup(params, w)
        const = q ** (-1.0 / q)
        lim0, liminf = B_q_limits(params, w)
        aux.update(limit_at_0=lim0, limit_at_inf=liminf)
        bounded = math.isfinite(val)
        comp = _two_limit_verdict(bounded, lim0, liminf)
        return BoundReport("esup_B_q", val, const, const, _mul(const, val), _mul(const, val),
                           BOUNDED if bounded else UNBOUNDED, comp, case, "p=1<=q esup criterion", where, aux,
                           "norm equals the largest column norm, q^(-1/q) esup B_q")

    if case == "vi":
        val = C_q(params, w)
        necessary = w.integral(rho=1.0, alpha=-lam / q)
        aux["necessary_integral"] = necessary
        if q == 1.0:
            lo_c = up_c = 1.0
        elif q > 1.0:
            lo_c = (_alpha0_min(q) / q) ** (1.0 / q)
            up_c = _beta0(q) ** (1.0 / q)
        else:
            # reverse Minkowski below, the one-sided Hardy bound above
            lo_c = q ** (-1.0 / q)
            up_c = q ** (-1.0 / q)
            aux["necessary_root"] = _root(necessary, q)
            return _one_sided(params, "C_q", val, _root(necessary, q), lo_c, up_c,
                              "p=inf integral criterion", aux, lower_name="necessary_root")
        bounded = math.isfinite(val)
        return BoundReport("C_q", val, lo_c, up_c, _mul(lo_c, val), _mul(up_c, val),
                           BOUNDED if bounded else UNBOUNDED, COMPACT if bounded else NOT_APPLICABLE,
                           case, "p=inf integral criterion", None, aux,
                           "boundedness is equivalent to compactness")

    if case == "vii":
        if p == 1.0:
            val = w.esup(0.0, inf)
            bounded = math.isfinite(val)
            return BoundReport("esup_v", val, 1.0, 1.0, val, val, BOUNDED if bounded else UNBOUNDED,
                               NEVER, case, "q=inf, p=1", None, aux, "never compact")
        val = _root(w.integral(rho=pp), pp) if math.isfinite(pp) else w.esup()
        bounded = math.isfinite(val)
        return BoundReport("v_norm_p'", val, 1.0, 1.0, val, val, BOUNDED if bounded else UNBOUNDED,
                           COMPACT if bounded else NOT_APPLICABLE, case, "q=inf, p>1", None, aux,
                           "norm equals ||v||_p'; bounded iff compact")

    raise CriterionError(f"unsupported exponent pair p={p}, q={q}")


def _two_limit_verdict(bounded: bool, lim0: float, liminf: float) -> str:
    if not bounded:
        return NOT_APPLICABLE
    return COMPACT if lim0 == 0.0 and liminf == 0.0 else NOT_COMPACT


def _one_sided(params, name, upper_q, lower_q, lo_c, up_c, ref, aux, lower_name=None) -> BoundReport:
    if math.isfinite(upper_q):
        decision, comp = BOUNDED, COMPACT
    elif math.isinf(lower_q):
        decision, comp = UNBOUNDED, NOT_APPLICABLE
    else:
        decision, comp = ONE_SIDED, UNDECIDED
    note = "sufficient and necessary conditions differ; boundedness is equivalent to compactness"
    return BoundReport(name, upper_q, lo_c, up_c, _mul(lo_c, lower_q), _mul(up_c, upper_q),
                       decision, comp, params.case, ref, None, aux, note)


def compactness_test(params: SpaceParams, w: Weight) -> str:
    """Compactness verdict; for ``q < p`` it coincides with boundedness."""
    rep = norm_criterion(params, w)
    if params.case == "vii" and params.p == 1.0:
        return NEVER
    if params.case in ("ii", "iii", "iv", "vi"):
        return EQUIVALENT
    return rep.compactness


# -- Schatten-class functionals ------------------------------------------

def schatten_X_alpha(alpha: float, lam: float, w: Weight) -> float:
    """``(integral x^-(lam alpha/2 + 1) (integral_0^x v^2)^(alpha/2) dx)^(1/alpha)``."""
    if not alpha > 0.0:
        raise CriterionError("alpha must be positive")
    if w.is_zero():
        return 0.0
    val = integrate_primitive(w, 2.0, alpha / 2.0, 0.0, alpha=-(lam * alpha / 2.0 + 1.0))
    return _root(val, alpha)


def hilbert_schmidt_exact(lam: float, w: Weight) -> float:
    """Exact S_2 norm on ``L^2``: ``(integral v^2 / (2 y^lam))^(1/2)``."""
    return _root(0.5 * w.integral(rho=2.0, alpha=-lam), 2.0)


def tau_series(lam: float, w: Weight, k_lo: int | None = None, k_hi: int | None = None):
    """Block values ``tau_k = 2^(-lam k/2) (integral_{Delta_k} v^2)^(1/2)``."""

    def block(k):
        return 2.0 ** (-lam * k / 2.0) * math.sqrt(w.integral(2.0 ** (k - 1), 2.0**k, rho=2.0))

    nlo, nhi = natural_range(w)
    e_lo, e_hi = end_exponents(w, 2.0, lam / 2.0)
    return block_series(block, nlo if k_lo is None else min(k_lo, nlo), nhi if k_hi is None else max(k_hi, nhi),
                        e_lo, e_hi)


def block_inner_products(lam: float, w: Weight, ks, normalized: bool = True) -> dict:
    """``<L f_k, g_k>`` for the block test functions used by the S_alpha lower bound.

    ``f_k = v chi_{Delta_k} / ||v chi_{Delta_k}||_2`` and ``g_k`` is constant on
    ``(2^-((k+1) lam), 2^-(k lam))``.  With ``normalized`` the constant makes
    ``||g_k||_2 = 1``; otherwise it is ``2^(k lam/2 + lam) / (2^lam - 1)``.
    """
    out = {}
    for k in ks:
        lo, hi = 2.0 ** (k - 1), 2.0**k
        mass = w.integral(lo, hi, rho=2.0)
        if mass == 0.0:
            out[k] = 0.0
            continue
        x1, x2 = 2.0 ** (-(k + 1) * lam), 2.0 ** (-k * lam)
        if normalized:
            height = 1.0 / math.sqrt(x2 - x1)
        else:
            height = 2.0 ** (k * lam / 2.0 + lam) / (2.0**lam - 1.0)

        def integrand(y):
            yl = y**lam
            return float(w(y)) ** 2 * (math.exp(-x1 * yl) - math.exp(-x2 * yl)) / yl

        val = quad(integrand, lo, hi, points=w.breakpoints)
        out[k] = height * val / math.sqrt(mass)
    return out


def block_lower_check(alpha: float, lam: float, w: Weight, k_range=None, singular_values=None,
                       oracle_size: int = 512) -> dict:
    """Check ``sum_n a_n^alpha >= (1/2) sum_k tau_k^alpha``.

    The left side is taken from the exact S_2 norm when ``alpha = 2`` and from
    the discretized operator's singular values (computed here unless
    supplied).  The Pietsch-type sum ``sum_k |<L f_k, g_k>|^alpha`` with
    orthonormal test systems is reported as an independent lower estimate.
    """
    if alpha < 1.0:
        raise CriterionError("the lower bound needs alpha >= 1")
    params = derived_params(2.0, 2.0, lam)
    if w.is_zero():
        return {"lhs_exact": 0.0, "lhs_oracle": 0.0, "rhs": 0.0, "pietsch_sum": 0.0, "holds": True, "tau": {}}
    rep = norm_criterion(params, w)
    if rep.compactness != COMPACT:
        raise CriterionError("operator is not compact on L^2")
    k_lo, k_hi = (None, None) if k_range is None else k_range
    taus = tau_series(lam, w, k_lo, k_hi).extend_for(alpha)
    rhs = 0.5 * taus.total(alpha)
    if singular_values is None:
        from .oracle import discretize, singular_values as svals

        op = discretize(params, w, {"size": oracle_size})
        singular_values = svals(op, min(oracle_size, 400))
    lhs_oracle = math.fsum(float(a) ** alpha for a in singular_values)
    lhs_exact = hilbert_schmidt_exact(lam, w) ** 2 if alpha == 2.0 else None
    ks = [k for k, v in taus.values.items() if v > 0.0]
    inner = block_inner_products(lam, w, ks, normalized=True)
    inner_raw = block_inner_products(lam, w, ks, normalized=False)
    pietsch = math.fsum(abs(v) ** alpha for v in inner.values())
    lhs = lhs_exact if lhs_exact is not None else lhs_oracle
    return {
        "alpha": alpha,
        "lhs_exact": lhs_exact,
        "lhs_oracle": lhs_oracle,
        "rhs": rhs,
        "pietsch_sum": pietsch,
        "pietsch_sum_unnormalized": math.fsum(abs(v) ** alpha for v in inner_raw.values()),
        "holds": bool(lhs >= rhs and lhs_oracle >= rhs * (1.0 - 0.01) and pietsch <= lhs * (1.0 + 1e-9)),
        "tau": dict(taus.values),
    }
