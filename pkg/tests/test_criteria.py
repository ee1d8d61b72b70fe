import math

import pytest

from lapbound import criteria
from lapbound.criteria import BOUNDED, COMPACT, NEVER, NOT_COMPACT
from lapbound.kernel import derived_params
from lapbound.weights import Weight

inf = math.inf


def test_case_i_box(box):
    rep = criteria.norm_criterion(derived_params(2, 2, 1), box)
    assert rep.value == pytest.approx(1.0)
    assert rep.lower_const == pytest.approx(0.70710678, rel=1e-8)
    assert rep.upper_const == pytest.approx(2.0)
    assert (rep.lower_bound, rep.upper_bound) == pytest.approx((0.70710678, 2.0))


def test_case_q1_exact():
    w = Weight.monomial(1.0, 2.0, 0, 1)
    rep = criteria.norm_criterion(derived_params(2, 1, 1), w)
    assert rep.value == pytest.approx(3**-0.5)
    assert rep.decision == BOUNDED
    assert rep.compactness == COMPACT


def test_p_inf_q1(W1):
    rep = criteria.norm_criterion(derived_params(inf, 1, 1), W1)
    assert rep.value == pytest.approx(1.0)


def test_constant_weight_not_compact():
    one = Weight.monomial()
    params = derived_params(2, 2, 1)
    rep = criteria.norm_criterion(params, one)
    assert rep.value == pytest.approx(1.0)
    assert rep.compactness == NOT_COMPACT
    assert criteria.compactness_test(params, one) == NOT_COMPACT


def test_compactness(W1):
    assert criteria.compactness_test(derived_params(2, 2, 1), W1) == COMPACT
    assert criteria.compactness_test(derived_params(1, inf, 1), W1) == NEVER


def test_X_alpha_and_hilbert_schmidt(W1):
    x2 = criteria.schatten_X_alpha(2, 1, W1)
    assert x2 == pytest.approx(math.sqrt(0.5), rel=1e-12)
    hs = criteria.hilbert_schmidt_exact(1, W1)
    assert hs == pytest.approx(0.5, rel=1e-14)
    assert hs == pytest.approx(math.sqrt(0.5) * x2, rel=1e-10)
    assert criteria.schatten_X_alpha(2, 1, Weight(())) == 0.0


def test_X2_identity_random():
    w = Weight([(0.0, 0.5, 1.5, 0.8), (0.5, 2.0, 0.7, 2.0)])
    for lam in (0.5, 1.0, 2.0):
        direct = criteria.schatten_X_alpha(2, lam, w) ** 2
        fubini = w.integral(rho=2.0, alpha=-lam) / lam
        assert direct == pytest.approx(fubini, rel=1e-10)


def test_homogeneity(W1):
    params = derived_params(3, 2, 1)
    a = criteria.norm_criterion(params, W1)
    b = criteria.norm_criterion(params, W1.scaled(2.5))
    assert b.value == pytest.approx(2.5 * a.value, rel=1e-12)
    assert b.decision == a.decision


def test_block_series(W1):
    tau = criteria.tau_series(1, W1)
    assert tau.values[0] == pytest.approx(math.sqrt(7 / 24))
    assert 0.5 * tau.total(2) == pytest.approx(7 / 36, rel=1e-10)


def test_block_lower_check_zero():
    rep = criteria.block_lower_check(2, 1, Weight(()))
    assert rep["holds"] and rep["rhs"] == 0.0
