import math

import numpy as np
import pytest

from lapbound import oracle as O
from lapbound import localnorm as L
from lapbound.kernel import derived_params
from lapbound.weights import Weight

inf = math.inf


def test_hs_refinement(W1, P22):
    # quadrature error is already below the window truncation at 64 nodes,
    # so refinement must keep the sum pinned rather than strictly improve it
    sums = []
    for n in (64, 128, 256):
        sv = O.singular_values(O.discretize(P22, W1, n))
        sums.append(float(np.sum(sv**2)))
    assert all(abs(s - 0.25) < 1e-3 * 0.25 for s in sums)
    assert max(sums) - min(sums) < 1e-6
    op = O.discretize(P22, W1, 256)
    assert abs(sums[-1] - 0.25) <= op.truncation_error["total"] + 1e-7


def test_zero_weight(P22):
    op = O.discretize(P22, Weight(()), 64)
    assert not np.any(op.matrix)
    assert not np.any(O.singular_values(op))
    assert O.operator_norm_pq(op, 3, 2).value == 0.0


def test_svd_agreement(W1, P22):
    op = O.discretize(P22, W1, 256)
    est = O.operator_norm_pq(op, 2, 2)
    assert est.value == pytest.approx(O.singular_values(op)[0], abs=1e-12)
    sv_full = np.linalg.svd(op.matrix, compute_uv=False)
    assert O.singular_values(op, 10) == pytest.approx(sv_full[:10], abs=1e-8)


def test_rank_one_holder():
    rng = np.random.default_rng(5)
    xi, zeta = rng.random(6), rng.random(9)
    mat = np.outer(xi, zeta)
    for p, q in ((2, 3), (3, 2), (1.5, 1.5), (4, 1.2)):
        pp = p / (p - 1)
        assert O.operator_norm_pq(mat, p, q).value == pytest.approx(np.linalg.norm(xi, q) * np.linalg.norm(zeta, pp),
                                                                    rel=1e-9)


def test_exact_discrete_cases():
    rng = np.random.default_rng(1)
    mat = rng.random((7, 5))
    assert O.operator_norm_pq(mat, 1, 2).value == pytest.approx(max(np.linalg.norm(mat, axis=0)))
    assert O.operator_norm_pq(mat, 2, inf).value == pytest.approx(max(np.linalg.norm(mat, axis=1)))
    assert O.operator_norm_pq(mat, 2, 1).value == pytest.approx(np.linalg.norm(mat.sum(axis=0)))


def test_ascent_q_lt_1_is_lower_bound():
    rng = np.random.default_rng(3)
    mat = rng.random((6, 4))
    est = O.operator_norm_pq(mat, 2, 0.5)
    for _ in range(200):
        f = rng.random(4)
        assert O.ratio(mat, f, 2, 0.5) <= est.value * (1 + 1e-9)


def test_volterra_spectrum():
    sv = O.singular_values(O.volterra_matrix(512), 3)
    assert sv == pytest.approx([2 / math.pi, 2 / (3 * math.pi), 2 / (5 * math.pi)], rel=1e-3)


def test_local_norms_inside_sandwich(W1, P22):
    for I in ((0.0, 1.0), (0.25, 0.5), (0.5, inf)):
        lo, up = L.K_bounds(I, P22, W1)
        val = O.local_norm(P22, W1, I, 256)["value"]
        assert lo * 0.98 <= val <= up * 1.02


def test_local_norm_q_lt_1():
    w = Weight([(0.0, 1.0, 1.0, 1.0), (1.0, 2.0, 1.0, 0.0)])
    params = derived_params(1.5, 0.8, 1)
    lo, up = L.K_bounds((0.25, 1.5), params, w)
    est = O.local_norm(params, w, (0.25, 1.5), 192)
    assert est["value"] <= up * 1.02


def test_unbounded_rejected(W1):
    with pytest.raises(O.OracleError):
        O.discretize(derived_params(2, 0.5, 1), W1, 64)


def test_finite_rank_matrix_rank(W1, P22):
    pts = (0.0, 0.3, 0.6, 1.2, inf)
    op = O.discretize(P22, W1, 256, breaks=pts[1:-1])
    assert O.rank(O.finite_rank_matrix(op, pts)) == 3
