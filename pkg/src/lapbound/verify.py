"""Invariant suite: every implemented inequality checked against closed forms and the oracle.

Each check returns a ``Check`` with the numbers it compared.  Reports carry
no timings or host data, so two runs with the same seed are byte-identical.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import criteria, fixtures, kernel, localnorm, oracle, partition, schatten
from .calculus import quad
from .kernel import derived_params

inf = math.inf

DISCRETIZATION_TOL = 0.02
HS_TOL = 0.01


@dataclass
class Check:
    name: str
    passed: bool
    values: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"name": self.name, "passed": bool(self.passed), "values": self.values}


def threads() -> int:
    env = os.environ.get("LS_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return os.cpu_count() or 1


def _w1():
    return fixtures.get("W1").weight


def check_weights(seed: int = 0) -> Check:
    """Exact power integrals against adaptive quadrature on every finite-valued fixture."""
    rows, ok = [], True
    for name in ("W1", "box", "square", "step", "root", "decay"):
        w = fixtures.get(name).weight
        for rho in (0.5, 1.0, 2.0, 3.0):
            for a, b in ((0.0, 0.5), (0.25, 1.5), (0.5, 3.0)):
                exact = w.power_integral(rho, a, b)
                num = quad(lambda t: float(w(t)) ** rho, a, b, points=w.breakpoints)
                err = abs(exact - num) / max(abs(exact), 1e-300) if exact else abs(num)
                ok &= err <= 1e-10
                rows.append(err)
    return Check("weights.power_integral", ok, {"max_rel_err": max(rows), "cases": len(rows)})


def check_kernel(seed: int = 0, count: int = 100) -> Check:
    """Integer-delta closed form against quadrature, and homogeneity."""
    rng = np.random.default_rng(seed)
    worst_q, worst_h = 0.0, 0.0
    for _ in range(count):
        z = float(np.exp(rng.uniform(-2.0, 2.0)))
        b = inf if rng.random() < 0.15 else z * float(1.0 + np.exp(rng.uniform(-3.0, 2.0)))
        lam = float(rng.uniform(0.3, 3.0))
        delta = int(rng.integers(1, 5))
        closed = kernel.tail_integral_binomial(z, b, delta, lam)
        num = kernel.tail_integral_quad(z, b, delta, lam)
        worst_q = max(worst_q, abs(closed - num) / closed)
        c = float(np.exp(rng.uniform(-1.0, 1.0)))
        lhs = kernel.tail_integral(c * z, c * b, delta, lam)
        rhs = c ** (-lam) * kernel.tail_integral(z, b, delta, lam)
        worst_h = max(worst_h, abs(lhs - rhs) / rhs)
    ok = worst_q <= 1e-9 and worst_h <= 1e-12
    return Check("kernel.closed_forms", ok, {"max_rel_err_quad": worst_q, "max_rel_err_homogeneity": worst_h,
                                             "tuples": count})


def check_hilbert_schmidt(size: int = 512) -> Check:
    w = _w1()
    params = derived_params(2.0, 2.0, 1.0)
    exact = criteria.hilbert_schmidt_exact(1.0, w) ** 2
    via_x = 0.5 * criteria.schatten_X_alpha(2.0, 1.0, w) ** 2
    sv = oracle.singular_values(oracle.discretize(params, w, size))
    hs = float(np.sum(sv**2))
    ok = abs(hs - 0.25) <= HS_TOL * 0.25 and abs(exact - via_x) <= 1e-10 * exact and abs(exact - 0.25) <= 1e-12
    return Check("hilbert_schmidt", ok, {"oracle_sum_sq": hs, "exact": exact, "via_X2": via_x, "size": size})


def check_norm_sandwich(size: int = 256) -> Check:
    w = _w1()
    rows, ok = [], True
    for p, q in ((2.0, 2.0), (2.0, 1.0), (1.0, 2.0), (inf, 1.0)):
        params = derived_params(p, q, 1.0)
        rep = criteria.norm_criterion(params, w)
        est = oracle.operator_norm_pq(oracle.discretize(params, w, size), p, q)
        inside = rep.lower_bound * (1 - DISCRETIZATION_TOL) <= est.value <= rep.upper_bound * (1 + DISCRETIZATION_TOL)
        ok &= inside
        rows.append({"p": p, "q": q, "lower": rep.lower_bound, "upper": rep.upper_bound, "oracle": est.value,
                     "method": est.method, "inside": inside})
    return Check("norm_sandwich", ok, {"regimes": rows})


def check_local_sandwich(size: int = 256) -> Check:
    w = _w1()
    params = derived_params(2.0, 2.0, 1.0)
    rows, ok = [], True
    for I in ((0.0, 1.0), (0.25, 0.5), (0.5, inf)):
        lo, up = localnorm.K_bounds(I, params, w)
        val = oracle.local_norm(params, w, I, size)["value"]
        inside = lo * (1 - DISCRETIZATION_TOL) <= val <= up * (1 + DISCRETIZATION_TOL)
        ok &= inside
        rows.append({"interval": list(I), "lower": lo, "upper": up, "oracle": val, "inside": inside})
    return Check("local_sandwich", ok, {"intervals": rows})


def check_exact_q1(size: int = 256) -> Check:
    w = _w1()
    params = derived_params(2.0, 1.0, 1.0)
    lo, up = localnorm.K_bounds((0.0, 1.0), params, w)
    b1 = localnorm.B1((0.0, 1.0), params, w)
    val = oracle.local_norm(params, w, (0.0, 1.0), size)["value"]
    target = 3.0**-0.5
    ok = (lo == up == b1) and abs(b1 - target) <= 1e-12 and 0.98 * target <= val <= target + 1e-6
    return Check("exact_q1", ok, {"B1": b1, "K_bounds": [lo, up], "oracle": val})


def check_partition(eps_grid=(0.4, 0.2, 0.1), size: int = 512) -> Check:
    w = _w1()
    params = derived_params(2.0, 2.0, 1.0)
    rows, ok, prev_n = [], True, -1
    for eps in eps_grid:
        part = partition.split(eps, params, w)
        bound = partition.an_upper(part, params)
        op = oracle.discretize(params, w, size, breaks=part.points[1:-1])
        sv = oracle.singular_values(op)
        a_next = float(sv[part.N]) if part.N < sv.size else 0.0
        resid = float(np.linalg.norm(oracle.residual_matrix(op, part.points), 2))
        rank = oracle.rank(oracle.finite_rank_matrix(op, part.points))
        u_ok = all(u <= eps * (1 + partition.K_RTOL) for u in part.u)
        good = a_next <= bound and resid <= bound * (1 + DISCRETIZATION_TOL) and rank <= part.N and u_ok
        good &= part.N >= prev_n
        prev_n = part.N
        ok &= good
        rows.append({"epsilon": eps, "N": part.N, "points": list(part.points), "bound": bound,
                     "a_N_plus_1": a_next, "residual_norm": resid, "rank_P": rank, "passed": good})
    return Check("partition_rank_bound", ok, {"rows": rows})


def check_lambda_j(seed: int = 0, count: int = 10) -> Check:
    params = derived_params(2.0, 2.0, 1.0)
    base = schatten.lambda_J_equivalence_check(params, _w1(), 1.0)
    ok = base["holds"] and abs(base["Lambda"] - 2.0 * math.sqrt(7.0 / 48.0)) <= 1e-9
    rng = np.random.default_rng(seed)
    rows = []
    for _ in range(count):
        w = fixtures.random_power_weight(rng)
        rep = schatten.lambda_J_equivalence_check(params, w, 1.0)
        ok &= rep["holds"]
        rows.append({"weight": w.to_records(), "left_ratio": rep["left_ratio"], "right_ratio": rep["right_ratio"],
                     "holds": rep["holds"]})
    return Check("lambda_J_equivalence", ok, {"W1": base, "random": rows})


def check_block_lower(size: int = 512) -> Check:
    rep = criteria.block_lower_check(2.0, 1.0, _w1(), oracle_size=size)
    ok = rep["holds"] and abs(rep["rhs"] - 7.0 / 36.0) <= 1e-12 and abs(rep["lhs_oracle"] - 0.25) <= HS_TOL * 0.25
    return Check("block_lower_bound", ok, rep)


def check_asymptotic_envelope(size: int = 512, nmax: int = 100) -> Check:
    w = _w1()
    params = derived_params(2.0, 2.0, 1.0)
    const = schatten.asymptotic_constant(params, w)
    sv = oracle.singular_values(oracle.discretize(params, w, size), nmax)
    table = schatten.asymptotic_ratio_table(sv, 2.0, const["value"], nmax)
    ok = const["side_condition"] and all(r["scaled"] <= 10.0 * const["value"] for r in table)
    return Check("asymptotic_envelope", ok, {"constant": const, "max_scaled": max(r["scaled"] for r in table),
                                             "table": table})


LEMMA_CASES = (
    ("max", (2.0, 2.0)),
    ("split", (2.0, 2.0)),
    ("split-delta", (3.0, 2.0)),
    ("split-delta", (2.0, 0.5)),
    ("max-bar", (1.0, 2.0)),
    ("split-bar", (1.0, 2.0)),
    ("split-delta-bar", (1.0, 0.5)),
)


def check_dyadic_lemmas(seed: int = 0, samples: int = 1000) -> Check:
    w = _w1()
    rows, ok = [], True
    for lemma, (p, q) in LEMMA_CASES:
        rep = schatten.dyadic_lemma_check(lemma, derived_params(p, q, 1.0), w,
                                          schatten.SampleSpec(count=samples, seed=seed))
        ok &= rep["holds"]
        rows.append({"lemma": lemma, "p": p, "q": q, "max_ratio": rep["max_ratio"],
                     "max_chain_ratio": rep["max_chain_ratio"], "max_stated_ratio": rep["max_stated_ratio"],
                     "stated_ratio_by_pieces": rep["stated_ratio_by_pieces"], "holds": rep["holds"]})
    return Check("dyadic_lemmas", ok, {"samples": samples, "rows": rows})


def check_hardy(size: int = 512) -> Check:
    closed = schatten.hardy_const_norm(1.0, 1.0, (0.0, 1.0), 2.0, 2.0)
    orc = schatten.hardy_norm_oracle(2.0, 2.0, size)
    sv = oracle.singular_values(oracle.volterra_matrix(size), 3)
    expect = [2.0 / ((2 * n - 1) * math.pi) for n in (1, 2, 3)]
    ok = abs(closed - 0.5) <= 1e-12 and all(abs(a - e) <= 1e-3 * e for a, e in zip(sv, expect))
    return Check("hardy_constants", ok, {"closed_form": closed, "sup_oracle": orc["value"],
                                         "volterra_singular_values": sv.tolist()})


def suite(seed: int = 0, samples: int = 1000, size: int = 512):
    """``(name, thunk)`` pairs for every check in a fixed order."""
    small = max(size // 2, 64)
    return [
        ("weights", lambda: check_weights(seed)),
        ("kernel", lambda: check_kernel(seed)),
        ("hilbert_schmidt", lambda: check_hilbert_schmidt(size)),
        ("norm_sandwich", lambda: check_norm_sandwich(small)),
        ("local_sandwich", lambda: check_local_sandwich(small)),
        ("exact_q1", lambda: check_exact_q1(small)),
        ("partition", lambda: check_partition(size=size)),
        ("lambda_j", lambda: check_lambda_j(seed)),
        ("block_lower", lambda: check_block_lower(size)),
        ("asymptotic", lambda: check_asymptotic_envelope(size)),
        ("dyadic", lambda: check_dyadic_lemmas(seed, samples)),
        ("hardy", lambda: check_hardy(size)),
    ]


def run(seed: int = 0, samples: int = 1000, size: int = 512, only=None, workers: int | None = None) -> dict:
    items = [(n, f) for n, f in suite(seed, samples, size) if only is None or n in only]
    with ThreadPoolExecutor(max_workers=workers or threads()) as pool:
        results = list(pool.map(lambda item: item[1](), items))
    return {
        "seed": seed,
        "samples": samples,
        "size": size,
        "passed": all(c.passed for c in results),
        "checks": [c.to_dict() for c in results],
    }
