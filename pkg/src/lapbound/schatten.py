"""Dyadic block profiles, the Lambda/J functionals and Schatten-type reports.

Blocks are ``Delta_k = [2^(k-1), 2^k]``.  ``sigma_k(delta)`` combines the tail
integral of the block ``[2^k, 2^(k+1)]`` with the ``L^p'`` mass of ``v`` on
``Delta_k``; the barred variant (``p = 1``) uses the block supremum of ``v``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import criteria, kernel
from .calculus import integrate_primitive, quad
from .dyadic import BlockSeries, block_series, end_exponents, natural_range
from .kernel import SpaceParams
from .localnorm import B0, B3
from .weights import Weight

inf = math.inf

REL_SLACK = 1e-9


class SchattenError(ValueError):
    pass


# -- profiles --------------------------------------------------------------

@dataclass
class DyadicProfile:
    k_lo: int
    k_hi: int
    sigma: dict
    tau: dict
    delta: float
    barred: bool
    s: float | None
    tail_bound: float
    series: BlockSeries = field(repr=False)

    def power_sum(self, s: float) -> tuple[float, float]:
        return self.series.power_sum(s)

    def to_dict(self) -> dict:
        return {
            "k_lo": self.k_lo,
            "k_hi": self.k_hi,
            "delta": self.delta,
            "barred": self.barred,
            "s": self.s,
            "tail_bound": self.tail_bound,
            "sigma": {str(k): v for k, v in self.sigma.items()},
            "tau": {str(k): v for k, v in self.tau.items()},
        }


def block_tail(k: int, delta: float, lam: float) -> float:
    """``T(2^k, 2^(k+1); delta) = 2^(-k lam) T(1, 2; delta)``."""
    return 2.0 ** (-k * lam) * kernel.tail_integral(1.0, 2.0, delta, lam)


def _sigma_block(params: SpaceParams, w: Weight, delta: float, barred: bool):
    q, lam, pp = params.q, params.lam, params.p_prime
    t12 = kernel.tail_integral(1.0, 2.0, delta, lam) ** (1.0 / q)

    def block(k: int) -> float:
        lo, hi = 2.0 ** (k - 1), 2.0**k
        if barred:
            mass = w.esup(lo, hi)
        else:
            mass = w.integral(lo, hi, rho=pp) ** (1.0 / pp)
        return 0.0 if mass == 0.0 else 2.0 ** (-k * lam / q) * t12 * mass

    return block


def sigma_profile(params: SpaceParams, w: Weight, k_lo: int | None = None, k_hi: int | None = None,
                  barred: bool = False, delta: float | None = None, s: float | None = None) -> DyadicProfile:
    """Exact block values over ``[k_lo, k_hi]`` plus geometric tails.

    With ``s`` given the range is widened until each tail of
    ``sum sigma_k^s`` is at most ``1e-12`` of the partial sum.
    """
    if math.isinf(params.q):
        raise SchattenError("block profiles need finite q")
    if not barred and math.isinf(params.p_prime):
        raise SchattenError("p = 1 needs the barred profile")
    delta = params.delta if delta is None else float(delta)
    nlo, nhi = natural_range(w)
    lo = nlo if k_lo is None else k_lo
    hi = nhi if k_hi is None else k_hi
    if lo > hi:
        raise SchattenError("need k_lo <= k_hi")
    rho = inf if barred else params.p_prime
    e_lo, e_hi = end_exponents(w, rho, params.lam / params.q)
    series = block_series(_sigma_block(params, w, delta, barred), lo, hi, e_lo, e_hi)
    if s is not None and k_lo is None and k_hi is None:
        series.extend_for(s)
    tail = series.power_sum(s)[1] if s is not None else float("nan")
    taus = criteria.tau_series(params.lam, w, series.k_lo, series.k_hi)
    return DyadicProfile(series.k_lo, series.k_hi, dict(series.values), dict(taus.values), delta, barred, s,
                         tail, series)


def Lambda_s(profile: DyadicProfile, s: float, with_tails: bool = True) -> float:
    """``(sum_k sigma_k^s)^(1/s)`` including the certified tails."""
    if not s > 0.0:
        raise SchattenError("s must be positive")
    partial, tail = profile.power_sum(s)
    total = partial + (tail if with_tails else 0.0)
    return inf if math.isinf(total) else total ** (1.0 / s)


def Lambda_s_range(profile: DyadicProfile, s: float, l: int, m: int) -> float:
    """``(sum_{k=l}^{m-1} sigma_k^s)^(1/s)``."""
    block = profile.series.block
    vals = [profile.sigma[k] if k in profile.sigma else block(k) for k in range(l, m)]
    total = math.fsum(v**s for v in vals if v > 0.0)
    return total ** (1.0 / s)


def _root(x: float, s: float) -> float:
    return inf if math.isinf(x) else x ** (1.0 / s)


def J_s(params: SpaceParams, w: Weight, s: float) -> float:
    """``(integral t^(-lam s/q) F(t)^(s/p' - 1) v^p'(t) dt)^(1/s)`` with ``F = integral_0^t v^p'``."""
    if not s > 0.0:
        raise SchattenError("s must be positive")
    pp = params.p_prime
    if math.isinf(pp):
        raise SchattenError("J_s needs p > 1; use J_bar_s")
    if w.is_zero():
        return 0.0
    val = integrate_primitive(w, pp, s / pp - 1.0, pp, alpha=-params.lam * s / params.q)
    return _root(val, s)


def J_s_local(params: SpaceParams, w: Weight, s: float, l: int, m: int, delta: float | None = None) -> float:
    """``J_s(l, m)``: the block-range version on ``Omega = [2^(l-1), 2^(m-1)]``.

    ``t^(-lam s/q)`` becomes ``T(t, 2^m; delta)^(s/q)`` and ``F`` integrates
    ``v chi_Omega`` only.
    """
    if l >= m:
        raise SchattenError("need l < m")
    pp, q, lam = params.p_prime, params.q, params.lam
    delta = params.delta if delta is None else delta
    a, b, top = 2.0 ** (l - 1), 2.0 ** (m - 1), 2.0**m
    local = w.restricted(a, b)
    if local.is_zero():
        return 0.0

    def extra(t):
        return kernel.tail_scalar(t, top, delta, lam) ** (s / q)

    pts = [x for x in w.breakpoints if a < x < b]
    val = integrate_primitive(local, pp, s / pp - 1.0, pp, a, b, extra=extra, points=pts)
    return _root(val, s)


def J_bar_s(params: SpaceParams, w: Weight, s: float) -> float:
    """``(integral vbar_0(t)^s t^(-lam s/q - 1) dt)^(1/s)``."""
    if not s > 0.0:
        raise SchattenError("s must be positive")
    if w.is_zero():
        return 0.0
    run = w.running_esup(0.0)
    return _root(run.integral(0.0, inf, rho=s, alpha=-params.lam * s / params.q - 1.0), s)


def J_bar_s_local(params: SpaceParams, w: Weight, s: float, l: int, m: int, delta: float | None = None) -> float:
    """``(integral_Omega vbar_a(t)^s d[-T(t, 2^m; delta)^(s/q)])^(1/s)`` with ``a = 2^(l-1)``."""
    if l >= m:
        raise SchattenError("need l < m")
    q, lam = params.q, params.lam
    delta = params.delta if delta is None else delta
    a, b, top = 2.0 ** (l - 1), 2.0 ** (m - 1), 2.0**m
    run = w.restricted(a, b).running_esup(a)
    total = 0.0
    for p, lo, hi in run.segments(a, b):
        if p.coeff == 0.0:
            continue

        def g(t, p=p):
            tv = kernel.tail_scalar(t, top, delta, lam)
            d = kernel.tail_derivative_scalar(t, top, delta, lam)
            return (p.coeff * t**p.exp) ** s * (s / q) * tv ** (s / q - 1.0) * d

        total += quad(g, lo, hi)
    return _root(total, s)


# -- Lambda/J equivalence --------------------------------------------------

def _block_sum_const(gamma: float, rho: float) -> float:
    """``C`` with ``sum_k rho^k (sum_{j<=k} b_j)^gamma <= C sum_k rho^k b_j^gamma``."""
    if gamma <= 1.0:
        return 1.0 / (1.0 - rho)
    return (1.0 - rho ** (1.0 / (2.0 * (gamma - 1.0)))) ** (1.0 - gamma) / (1.0 - math.sqrt(rho))


def equivalence_constants(params: SpaceParams, s: float, delta: float | None = None, barred: bool = False,
                          lam0: float | None = None) -> dict:
    """Explicit constants of ``Lambda_s <= c_left J_s`` and ``J_s(l, m) <= c_right Lambda_s(l, m)``."""
    q, lam = params.q, params.lam
    delta = params.delta if delta is None else delta
    rho = 2.0 ** (-lam * s / q)
    c1_stated = kernel.tail_integral_lower_C1(lam, lam0, delta)
    c1_exact = kernel.tail_integral(1.0, 2.0, delta, lam)
    if barred:
        left = (delta ** (s / q) * (q / (lam * s)) * (1.0 - rho)) ** (-1.0 / s)
        left_derived = left

        def right(c1):
            return (2.0 ** (lam * s / q) * delta ** (-s / q) * c1 ** (-s / q) / (1.0 - rho)) ** (1.0 / s)
    else:
        pp = params.p_prime
        left = (delta ** (1.0 / q) * (pp / s) * (1.0 - rho)) ** (-1.0 / s)
        left_derived = (delta ** (s / q) * (pp / s) * (1.0 - rho)) ** (-1.0 / s)
        cgam = _block_sum_const(s / pp, rho)

        def right(c1):
            return ((pp / s) * 2.0 ** (s * lam / q) * delta ** (-s / q) * cgam * c1 ** (-s / q)) ** (1.0 / s)

    return {
        "left_const": left,
        "left_const_derived": left_derived,
        "right_const": right(c1_stated),
        "right_const_exact_C1": right(c1_exact),
        "C1": c1_stated,
        "C1_exact": c1_exact,
        "delta": delta,
    }


def _default_range(w: Weight) -> tuple[int, int]:
    lo, hi = natural_range(w)
    return lo - 6, hi + 1


def lambda_J_equivalence_check(params: SpaceParams, w: Weight, s: float, k_range=None, barred: bool | None = None,
                               lam0: float | None = None) -> dict:
    """Check both directions of the Lambda/J equivalence with explicit constants."""
    if not s > 0.0:
        raise SchattenError("s must be positive")
    barred = (params.p == 1.0) if barred is None else barred
    consts = equivalence_constants(params, s, barred=barred, lam0=lam0)
    prof = sigma_profile(params, w, barred=barred, s=s)
    lam_val = Lambda_s(prof, s)
    j_val = J_bar_s(params, w, s) if barred else J_s(params, w, s)
    left_rhs = consts["left_const"] * j_val if j_val > 0.0 else 0.0
    if math.isinf(lam_val) and math.isinf(left_rhs):
        left_ok, vacuous = True, True
    else:
        left_ok, vacuous = lam_val <= left_rhs * (1.0 + REL_SLACK), False
    l, m = _default_range(w) if k_range is None else k_range
    j_loc = J_bar_s_local(params, w, s, l, m) if barred else J_s_local(params, w, s, l, m)
    lam_loc = Lambda_s_range(prof, s, l, m)
    right_rhs = consts["right_const"] * lam_loc
    right_ok = j_loc <= right_rhs * (1.0 + REL_SLACK)
    return {
        "s": s,
        "barred": barred,
        "Lambda": lam_val,
        "J": j_val,
        "left_const": consts["left_const"],
        "left_const_derived": consts["left_const_derived"],
        "left_rhs": left_rhs,
        "left_ratio": _ratio(lam_val, j_val),
        "left_holds": left_ok,
        "vacuous": vacuous,
        "range": [l, m],
        "J_local": j_loc,
        "Lambda_local": lam_loc,
        "right_const": consts["right_const"],
        "right_const_exact_C1": consts["right_const_exact_C1"],
        "C1": consts["C1"],
        "right_ratio": _ratio(j_loc, lam_loc),
        "right_holds": right_ok,
        "holds": left_ok and right_ok,
    }


def _ratio(a: float, b: float) -> float:
    if a == 0.0:
        return 0.0
    if b == 0.0 or math.isinf(a):
        return inf
    return a / b


# -- dyadic lemma verifiers ------------------------------------------------

LEMMAS = ("max", "split", "split-delta", "max-bar", "split-bar", "split-delta-bar")


@dataclass
class SampleSpec:
    count: int = 1000
    seed: int = 0
    k_min: int | None = None
    k_max: int | None = None
    max_pieces: int = 4


def lemma_constant(lemma_id: str, params: SpaceParams, l: int = 1) -> dict:
    """``{"stated": ..., "proof": ...}``: the nominal lemma factor and the one a direct derivation yields."""
    lam, q, th = params.lam, params.q, params.theta
    if lemma_id == "max":
        pp = params.p_prime
        c = 2.0 ** (lam / q) * (1.0 - 2.0**-lam) ** (-1.0 / q) / (1.0 - 2.0 ** (-pp * lam / q)) ** (1.0 / pp)
        return {"stated": c, "proof": c}
    if lemma_id == "split":
        return {"stated": 1.0, "proof": 2.0 ** (lam * th / q)}
    if lemma_id == "split-delta":
        stated = (2.0**lam - 1.0) ** (th / q)
        delta = params.delta
        return {"stated": stated, "proof": stated * ((1.0 - 2.0**-lam) ** -1.0 * l ** (1.0 - delta)) ** (th / q)}
    if lemma_id == "max-bar":
        c = 2.0 ** (lam / q) * (1.0 - 2.0**-lam) ** (-1.0 / q)
        return {"stated": c, "proof": c}
    if lemma_id == "split-bar":
        return {"stated": 1.0, "proof": 2.0**lam}
    if lemma_id == "split-delta-bar":
        return {"stated": 1.0, "proof": 2.0**lam * l ** (1.0 - q)}
    raise SchattenError(f"unknown lemma {lemma_id!r}")


def _lemma_params_ok(lemma_id: str, params: SpaceParams):
    p, q = params.p, params.q
    ok = {
        "max": 1.0 < p <= q < inf,
        "split": 1.0 < p <= q < inf,
        "split-delta": 1.0 < p < inf and q < p,
        "max-bar": p == 1.0 and 1.0 <= q < inf,
        "split-bar": p == 1.0 and 1.0 <= q < inf,
        "split-delta-bar": p == 1.0 and q < 1.0,
    }[lemma_id]
    if not ok:
        raise SchattenError(f"{lemma_id} does not apply to p={p}, q={q}")


def _in_block(rng, k: int) -> float:
    return 2.0 ** (k - 1 + rng.random())


def _split_block(rng, k: int, n: int) -> list:
    return sorted(2.0 ** (k - 1 + rng.random()) for _ in range(n + 1))


def dyadic_lemma_check(lemma_id: str, params: SpaceParams, w: Weight, spec: SampleSpec | None = None) -> dict:
    """Evaluate a dyadic lemma on random configurations.

    For every sample the left side is compared with the intermediate value of
    the proof's chain and with ``proof constant * right side``.  ``ratio`` is
    left / (proof constant * right side) and must stay at most 1;
    ``stated_ratio`` uses the factor written in the statement instead.
    """
    spec = spec or SampleSpec()
    _lemma_params_ok(lemma_id, params)
    rng = np.random.default_rng(spec.seed)
    nlo, nhi = natural_range(w)
    k_min = nlo - 4 if spec.k_min is None else spec.k_min
    k_max = nhi if spec.k_max is None else spec.k_max
    lam, q = params.lam, params.q
    barred = lemma_id.endswith("'")
    delta = q if lemma_id == "split-delta-bar" else (params.delta if lemma_id == "split-delta" else 1.0)
    sig = _sigma_block(params, w, delta, barred)
    cache: dict = {}

    def sigma(k):
        if k not in cache:
            cache[k] = sig(k)
        return cache[k]

    worst = {"ratio": 0.0, "stated_ratio": 0.0, "chain_ratio": 0.0, "sample": None}
    by_l: dict = {}
    fails = 0
    for i in range(spec.count):
        if lemma_id in ("max", "max-bar"):
            k1 = int(rng.integers(k_min, k_max + 1))
            k2 = int(rng.integers(k1, k_max + 1))
            k3 = int(rng.integers(max(k2, k1 + 1), k_max + 3))
            z1, z0, z2 = _in_block(rng, k1), _in_block(rng, k2), _in_block(rng, k3)
            gap = max(z0 ** (-lam) - z2 ** (-lam), 0.0) ** (1.0 / q)
            if barred:
                mass = w.esup(z1, z0) if z1 < z0 else 0.0
                chain = 2.0 ** (-(k2 - 1) * lam / q) * w.esup(2.0 ** (k1 - 1), 2.0**k2)
            else:
                pp = params.p_prime
                mass = w.integral(z1, z0, rho=pp) ** (1.0 / pp) if z1 < z0 else 0.0
                chain = 2.0 ** (-(k2 - 1) * lam / q) * w.integral(2.0 ** (k1 - 1), 2.0**k2, rho=pp) ** (1.0 / pp)
            lhs = gap * mass
            rhs = max(sigma(k) for k in range(k1, k2 + 1))
            l = 1
            sample = {"k": [k1, k2, k3], "z": [z1, z0, z2]}
        else:
            k = int(rng.integers(k_min, k_max + 1))
            l = int(rng.integers(1, spec.max_pieces + 1))
            c = _split_block(rng, k, l)
            sample = {"k": k, "c": c}
            lhs, chain = _lemma_sum(lemma_id, params, w, c, rng, sample)
            rhs = sigma(k) ** (params.theta if lemma_id in ("split", "split-delta") else q)
        consts = lemma_constant(lemma_id, params, l)
        r_proof = _ratio(lhs, consts["proof"] * rhs)
        r_stated = _ratio(lhs, consts["stated"] * rhs)
        r_chain = _ratio(lhs, chain)
        ok = r_proof <= 1.0 + REL_SLACK and r_chain <= 1.0 + REL_SLACK
        fails += not ok
        if r_proof > worst["ratio"]:
            worst.update(ratio=r_proof, sample=sample)
        worst["stated_ratio"] = max(worst["stated_ratio"], r_stated)
        worst["chain_ratio"] = max(worst["chain_ratio"], r_chain)
        by_l[l] = max(by_l.get(l, 0.0), r_stated)
    return {
        "lemma": lemma_id,
        "count": spec.count,
        "seed": spec.seed,
        "max_ratio": worst["ratio"],
        "max_stated_ratio": worst["stated_ratio"],
        "max_chain_ratio": worst["chain_ratio"],
        "stated_ratio_by_pieces": {str(k): v for k, v in sorted(by_l.items())},
        "worst_sample": worst["sample"],
        "failures": fails,
        "holds": fails == 0,
    }


def _lemma_sum(lemma_id: str, params: SpaceParams, w: Weight, c: list, rng, sample: dict) -> tuple[float, float]:
    """Left side and the post-Hoelder chain value for the block-sum lemmas."""
    lam, q = params.lam, params.q
    lhs_terms, chain_terms = [], []
    if lemma_id == "split":
        pp, th = params.p_prime, params.theta
        z = [ci + (cj - ci) * rng.random() for ci, cj in zip(c[:-1], c[1:])]
        sample["z"] = z
        for ci, zi, cj in zip(c[:-1], z, c[1:]):
            lhs_terms.append((zi ** (-lam) - cj ** (-lam)) ** (th / q) * w.integral(ci, zi, rho=pp) ** (th / pp))
        gaps = math.fsum(ci ** (-lam) - cj ** (-lam) for ci, cj in zip(c[:-1], c[1:]))
        mass = w.integral(c[0], c[-1], rho=pp)
        return math.fsum(lhs_terms), gaps ** (th / q) * mass ** (th / pp)
    if lemma_id == "split-bar":
        z = [ci + (cj - ci) * rng.random() for ci, cj in zip(c[:-1], c[1:])]
        sample["z"] = z
        for ci, zi, cj in zip(c[:-1], z, c[1:]):
            lhs_terms.append((zi ** (-lam) - cj ** (-lam)) * w.esup(ci, zi) ** q)
            chain_terms.append((ci ** (-lam) - cj ** (-lam)) * w.esup(ci, cj) ** q)
        return math.fsum(lhs_terms), math.fsum(chain_terms)
    if lemma_id == "split-delta":
        pp, th, delta = params.p_prime, params.theta, params.delta
        masses, tails = [], []
        for ci, cj in zip(c[:-1], c[1:]):
            lhs_terms.append(B0(delta, (ci, cj), params, w) ** th)
            masses.append(w.integral(ci, cj, rho=pp))
            tails.append(kernel.tail_integral(ci, cj, delta, lam))
        chain = math.fsum(m ** (th / pp) * t ** (th / q) for m, t in zip(masses, tails))
        return math.fsum(lhs_terms), chain
    # barred split with delta = q
    for ci, cj in zip(c[:-1], c[1:]):
        lhs_terms.append(B3((ci, cj), params, w) ** q)
        chain_terms.append(w.esup(ci, cj) ** q * kernel.tail_integral(ci, cj, q, lam))
    return math.fsum(lhs_terms), math.fsum(chain_terms)


# -- Schatten-type upper bound reports -------------------------------------

def _require_compact(params: SpaceParams, w: Weight):
    verdict = criteria.compactness_test(params, w)
    if verdict in (criteria.NOT_COMPACT, criteria.NEVER):
        raise SchattenError("operator is not compact")
    if verdict == criteria.EQUIVALENT and criteria.norm_criterion(params, w).decision == criteria.UNBOUNDED:
        raise SchattenError("operator is unbounded")


def schatten_upper_report(params: SpaceParams, w: Weight, s: float, singular_values=None) -> dict:
    """Which weighted Schatten sum is controlled, by which J-quantity, and its value.

    The bound reads ``sum_n (a_n u_n)^s <= const(p, q, s, lam) * Q^s`` with
    ``const`` left symbolic.  Given oracle singular values the realized ratio
    ``(sum (a_n u_n)^s)^(1/s) / Q`` is attached as an empirical constant.
    """
    p, q = params.p, params.q
    if math.isinf(p) or math.isinf(q):
        raise SchattenError("Schatten reports need finite p and q")
    _require_compact(params, w)
    if p > 1.0:
        th = params.theta
        if not s > th:
            raise SchattenError(f"need s > theta = {th}")
        if p <= q:
            u_exp, index, form = -1.0 / params.p_prime, s, "n^(-1/p')"
        else:
            r = params.r
            index = s if s <= r else r
            if q >= 1.0:
                u_exp, form = -1.0 / params.p_prime, "n^(-1/p')"
            else:
                u_exp, form = 1.0 / p - 1.0 / q, "n^(1/p - 1/q)"
        name = f"J_{index:g}"
        value = J_s(params, w, index)
        lam_const = equivalence_constants(params, index)["left_const"]
    else:
        if not s > q:
            raise SchattenError(f"need s > q = {q}")
        if q >= 1.0:
            index, u_exp, form = s, 0.0, "1"
        else:
            cap = q / (1.0 - q)
            index = s if s <= cap else cap
            u_exp, form = 1.0 - 1.0 / q, "n^(1 - 1/q)"
        name = f"Jbar_{index:g}"
        value = J_bar_s(params, w, index)
        lam_const = equivalence_constants(params, index, barred=True)["left_const"]
    out = {
        "p": p,
        "q": q,
        "lam": params.lam,
        "s": s,
        "case": params.case,
        "u_exponent": u_exp,
        "u_form": form,
        "quantity": name,
        "quantity_index": index,
        "value": value,
        "bound_form": f"sum_n (a_n u_n)^s <= const(p,q,s,lam) * {name}^s, u_n = {form}",
        "const": "symbolic",
        "lambda_J_left_const": lam_const,
    }
    if p == 2.0 and q == 2.0 and s == 2.0:
        x2 = criteria.schatten_X_alpha(2.0, params.lam, w)
        out["X2"] = x2
        out["J2_over_X2"] = _ratio(value, x2)
        out["J2_over_X2_expected"] = math.sqrt(params.lam)
    if singular_values is not None:
        a = np.asarray(singular_values, dtype=float)
        n = np.arange(1, a.size + 1, dtype=float)
        lhs = float(np.sum((a * n**u_exp) ** s)) ** (1.0 / s)
        out["oracle_weighted_sum"] = lhs
        out["empirical_const"] = _ratio(lhs, value)
    return out


# -- asymptotics -----------------------------------------------------------

def asymptotic_constant(params: SpaceParams, w: Weight) -> dict:
    """Integral bounding ``limsup n^(1/q) a_n`` plus the block-sum side condition."""
    p, q, lam = params.p, params.q, params.lam
    if not (1.0 <= p <= q < inf):
        raise SchattenError("asymptotics need 1 <= p <= q < inf")
    if w.is_zero():
        return {"value": 0.0, "side_condition": True, "side_sum": 0.0, "exponent": None}
    if p > 1.0:
        th = params.theta
        val = _root(w.integral(rho=th, alpha=-(lam + 1.0) * th / q), th)
        prof = sigma_profile(params, w, s=th)
        side = Lambda_s(prof, th)
        expo = th
    else:
        val = _root(w.integral(rho=q, alpha=-lam - 1.0), q)
        prof = sigma_profile(params, w, barred=True, s=q)
        side = Lambda_s(prof, q)
        expo = q
    return {"value": val, "side_condition": math.isfinite(side), "side_sum": side, "exponent": expo}


def asymptotic_ratio_table(singular_values, q: float, constant: float, nmax: int = 100) -> list[dict]:
    """Rows ``(n, a_n, n^(1/q) a_n, ratio to constant)`` for inspection."""
    rows = []
    for i, a in enumerate(np.asarray(singular_values, dtype=float)[:nmax], start=1):
        scaled = i ** (1.0 / q) * a
        rows.append({"n": i, "a_n": float(a), "scaled": scaled, "ratio": _ratio(scaled, constant)})
    return rows


# -- Hardy operator --------------------------------------------------------

def hardy_apply(I, v_weight, w_weight, f, t: float) -> float:
    """``w(t) * integral_a^t f v`` on ``I = (a, b)``; zero outside ``I``."""
    a, b = float(I[0]), float(I[1])
    if not a < t < b:
        return 0.0
    pts = [x for x in getattr(v_weight, "breakpoints", []) if a < x < t]

    def g(y):
        vy = float(v_weight(y))
        return 0.0 if vy == 0.0 else f(y) * vy

    return float(w_weight(t)) * quad(g, a, t, points=pts)


def alpha_pq(p: float, q: float) -> float:
    """Closed form ``(theta/p')^(1/p') (theta/q)^(1/q)`` with ``alpha_(1,q) = 1``."""
    if not 1.0 <= p <= q < inf:
        raise SchattenError("alpha_pq needs 1 <= p <= q < inf")
    if p == 1.0:
        return 1.0
    pp = kernel.conjugate(p)
    th = pp * q / (pp + q)
    return (th / pp) ** (1.0 / pp) * (th / q) ** (1.0 / q)


def hardy_const_norm(xi: float, zeta: float, I, p: float, q: float) -> float:
    """Norm formula for constant weights ``v = xi``, ``w = zeta`` on a finite interval."""
    a, b = float(I[0]), float(I[1])
    if not (0.0 <= a < b < inf):
        raise SchattenError("constant-weight norm needs a finite interval")
    return alpha_pq(p, q) * xi * zeta * (b - a) ** (1.0 - 1.0 / p + 1.0 / q)


def hardy_norm_oracle(p: float, q: float, n: int = 512) -> dict:
    """Unit-ball supremum for the Hardy operator on ``(0, 1)`` from its discretization."""
    from . import oracle

    mat = oracle.volterra_matrix(n, p=p, q=q)
    est = oracle.operator_norm_pq(mat, p, q)
    return {"value": est.value, "method": est.method, "exact_discrete": est.exact, "size": n,
            "closed_form": alpha_pq(p, q)}


__all__ = [
    "DyadicProfile", "SampleSpec", "LEMMAS", "SchattenError", "block_tail", "sigma_profile", "Lambda_s",
    "Lambda_s_range", "J_s", "J_s_local", "J_bar_s", "J_bar_s_local", "equivalence_constants",
    "lambda_J_equivalence_check", "lemma_constant", "dyadic_lemma_check", "schatten_upper_report",
    "asymptotic_constant", "asymptotic_ratio_table", "hardy_apply", "alpha_pq", "hardy_const_norm",
    "hardy_norm_oracle",
]
