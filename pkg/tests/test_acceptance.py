"""Acceptance criteria, one test each; a PASS/FAIL line per criterion is printed at the end of the run."""

import math
import time

import numpy as np
import pytest

from lapbound import cli, criteria, kernel, localnorm, oracle, partition, schatten, verify
from lapbound.fixtures import get, random_power_weight
from lapbound.kernel import derived_params

inf = math.inf
RESULTS: dict[str, tuple[bool, str]] = {}


def record(key, ok, detail=""):
    RESULTS[key] = (bool(ok), detail)
    return ok


@pytest.fixture(scope="module")
def w1():
    return get("W1").weight


def test_c01_hilbert_schmidt(w1):
    t0 = time.perf_counter()
    sv = oracle.singular_values(oracle.discretize(derived_params(2, 2, 1), w1, 512))
    elapsed = time.perf_counter() - t0
    hs = float(np.sum(sv**2))
    exact = criteria.hilbert_schmidt_exact(1.0, w1) ** 2
    via_x = 0.5 * criteria.schatten_X_alpha(2.0, 1.0, w1) ** 2
    ok = abs(hs - 0.25) <= 0.01 * 0.25 and abs(exact - 0.25) <= 1e-10 and abs(via_x - exact) <= 1e-10
    record("1 Hilbert-Schmidt identity", ok and elapsed < 10, f"oracle={hs:.8f} exact={exact} {elapsed:.1f}s")
    assert ok and elapsed < 10


def test_c02_norm_sandwich(w1):
    t0 = time.perf_counter()
    rows = []
    for p, q in ((2.0, 2.0), (2.0, 1.0), (1.0, 2.0), (inf, 1.0)):
        params = derived_params(p, q, 1.0)
        rep = criteria.norm_criterion(params, w1)
        est = oracle.operator_norm_pq(oracle.discretize(params, w1, 256), p, q).value
        rows.append((p, q, rep.lower_bound * 0.98 <= est <= rep.upper_bound * 1.02, est))
    p22 = criteria.norm_criterion(derived_params(2, 2, 1), w1)
    consts = math.isclose(p22.lower_const, 0.70711, abs_tol=1e-5) and math.isclose(p22.upper_const, 2.0)
    elapsed = time.perf_counter() - t0
    ok = all(r[2] for r in rows) and consts and elapsed < 60
    record("2 two-sided norm sandwich", ok, " ".join(f"({p:g},{q:g})={e:.5f}" for p, q, _, e in rows))
    assert ok


def test_c03_exact_q1(w1):
    params = derived_params(2.0, 1.0, 1.0)
    lo, up = localnorm.K_bounds((0.0, 1.0), params, w1)
    b1 = localnorm.B1((0.0, 1.0), params, w1)
    val = oracle.local_norm(params, w1, (0.0, 1.0), 256)["value"]
    target = 3.0**-0.5
    ok = lo == up == b1 and abs(b1 - target) <= 1e-12 and 0.98 * target <= val <= target + 1e-6
    record("3 exact q=1 local norm", ok, f"B1={b1:.8f} oracle={val:.8f}")
    assert ok


def test_c04_rank_bound(w1):
    t0 = time.perf_counter()
    params = derived_params(2, 2, 1)
    rows = []
    for eps in (0.4, 0.2, 0.1):
        part = partition.split(eps, params, w1)
        bound = eps * math.sqrt(part.N + 1)
        op = oracle.discretize(params, w1, 512, breaks=part.points[1:-1])
        sv = oracle.singular_values(op)
        a_next = float(sv[part.N]) if part.N < sv.size else 0.0
        resid = float(np.linalg.norm(oracle.residual_matrix(op, part.points), 2))
        rows.append((eps, part.N, a_next <= bound and resid <= bound * 1.02, a_next, resid))
    elapsed = time.perf_counter() - t0
    ok = all(r[2] for r in rows) and elapsed < 60
    record("4 partition rank bound", ok, " ".join(f"eps={e}:N={n},a={a:.4f},res={r:.4f}" for e, n, _, a, r in rows))
    assert ok


def test_c05_lambda_j(w1):
    params = derived_params(2, 2, 1)
    base = schatten.lambda_J_equivalence_check(params, w1, 1.0)
    ok = (math.isclose(base["Lambda"], 0.76376, abs_tol=1e-5) and math.isclose(base["J"], 1.73205, abs_tol=1e-5)
          and math.isclose(base["left_const"], 1.70711, abs_tol=1e-5) and base["Lambda"] <= 1.70711 * base["J"]
          and base["right_holds"] and base["C1"] == kernel.tail_integral_lower_C1(1.0, 0.5))
    rng = np.random.default_rng(0)
    rand = [schatten.lambda_J_equivalence_check(params, random_power_weight(rng, beta=(0.0, 3.0)), 1.0)["holds"]
            for _ in range(10)]
    ok = ok and all(rand)
    record("5 Lambda-J equivalence", ok, f"Lambda={base['Lambda']:.6f} J={base['J']:.6f} random={sum(rand)}/10")
    assert ok


def test_c06_block_lower(w1):
    rep = criteria.block_lower_check(2.0, 1.0, w1, oracle_size=512)
    ok = (rep["holds"] and abs(rep["rhs"] - 7 / 36) <= 1e-12 and rep["lhs_exact"] == pytest.approx(0.25)
          and abs(rep["lhs_oracle"] - 0.25) <= 0.01 * 0.25 and rep["rhs"] <= rep["lhs_oracle"])
    record("6 block lower bound", ok, f"rhs={rep['rhs']:.6f} lhs_oracle={rep['lhs_oracle']:.6f}")
    assert ok


def test_c07_asymptotic_envelope(w1):
    params = derived_params(2, 2, 1)
    const = schatten.asymptotic_constant(params, w1)["value"]
    sv = oracle.singular_values(oracle.discretize(params, w1, 512), 100)
    table = schatten.asymptotic_ratio_table(sv, 2.0, const, 100)
    top = max(r["scaled"] for r in table)
    ok = math.isclose(const, 1.0) and len(table) == 100 and top <= 10.0 * const
    record("7 asymptotic envelope", ok, f"max n^(1/2) a_n = {top:.5f}, constant = {const}")
    assert ok


# frozen maxima at 1000 samples, seed 0: (proof-constant ratio, chain ratio, statement ratio)
LEMMA_REGRESSION = {
    ("max", 2.0, 2.0): (0.5021249959902113, 0.9038994296377522, 0.5021249959902113),
    ("split", 2.0, 2.0): (0.3622867043066017, 0.49655812984194037, 0.5123507706978473),
    ("split-delta", 3.0, 2.0): (0.5128144049828255, 0.6013490583103397, 0.690197006451032),
    ("split-delta", 2.0, 0.5): (0.7607357379062417, 0.8784440144667668, 2.3061195213620054),
    ("max-bar", 1.0, 2.0): (0.9605808301471753, 0.9805427569970924, 0.9605808301471753),
    ("split-bar", 1.0, 2.0): (0.2717343340554412, 0.8877290567152101, 0.5434686681108823),
    ("split-delta-bar", 1.0, 0.5): (0.7990297096705588, 0.99955151620123, 3.042247009673877),
}


@pytest.fixture(scope="module")
def lemma_reports(w1):
    out = {}
    for lemma, (p, q) in verify.LEMMA_CASES:
        out[(lemma, p, q)] = schatten.dyadic_lemma_check(lemma, derived_params(p, q, 1.0), w1,
                                                         schatten.SampleSpec(count=1000, seed=0))
    return out


def test_c08_dyadic_lemmas_derived_constants(lemma_reports):
    ok = True
    for key, rep in lemma_reports.items():
        want = LEMMA_REGRESSION[key]
        got = (rep["max_ratio"], rep["max_chain_ratio"], rep["max_stated_ratio"])
        ok &= rep["holds"] and rep["max_ratio"] <= 1.0 and rep["max_chain_ratio"] <= 1.0
        ok &= all(math.isclose(g, e, rel_tol=1e-9) for g, e in zip(got, want))
    record("8a dyadic lemmas vs derived constants", ok, f"{len(lemma_reports)} cases x 1000 samples")
    assert ok


@pytest.mark.xfail(strict=True, reason="the stated factor for the delta-split lemmas is not uniform in the "
                                       "number of pieces when q < 1; see stated_ratio_by_pieces")
def test_c08_dyadic_lemmas_stated_constants(lemma_reports):
    worst = {k: r["max_stated_ratio"] for k, r in lemma_reports.items()}
    ok = all(v <= 1.0 for v in worst.values())
    bad = ", ".join(f"{k[0]}({k[1]:g},{k[2]:g})={v:.3f}" for k, v in worst.items() if v > 1.0)
    record("8b dyadic lemmas vs stated constants", ok, f"exceeded: {bad}" if bad else "")
    assert ok


def test_c09_kernel_closed_forms():
    rng = np.random.default_rng(0)
    worst_q = worst_h = 0.0
    for _ in range(100):
        z = float(np.exp(rng.uniform(-2, 2)))
        b = inf if rng.random() < 0.15 else z * float(1 + np.exp(rng.uniform(-3, 2)))
        lam = float(rng.uniform(0.3, 3.0))
        delta = int(rng.integers(1, 5))
        closed = kernel.tail_integral_binomial(z, b, delta, lam)
        worst_q = max(worst_q, abs(closed - kernel.tail_integral_quad(z, b, delta, lam)) / closed)
        c = float(np.exp(rng.uniform(-1, 1)))
        lhs = kernel.tail_integral(c * z, c * b, delta, lam)
        rhs = c ** (-lam) * kernel.tail_integral(z, b, delta, lam)
        worst_h = max(worst_h, abs(lhs - rhs) / rhs)
    ok = worst_q <= 1e-9 and worst_h <= 1e-12
    record("9 kernel closed forms", ok, f"quad rel err {worst_q:.2e}, homogeneity {worst_h:.2e}")
    assert ok


def test_c10_determinism(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    codes = [cli.main(["verify", "--seed", "7", "-o", str(d)]) for d in (a, b)]
    same = all((a / f).read_bytes() == (b / f).read_bytes() for f in ("verify-W1.json", "verify-W1.csv"))
    ok = same and codes == [0, 0]
    record("10 verify determinism", ok, f"exit codes {codes}")
    assert ok
