import math

import pytest

from lapbound import localnorm as L
from lapbound.kernel import derived_params
from lapbound.localnorm import RegimeError
from lapbound.weights import Weight

inf = math.inf


def test_gamma_constants():
    g = L.gamma_constants(derived_params(2, 2, 1))
    assert (g.alpha0, g.beta0) == (2.0, 2.0)
    assert g.gamma0 == pytest.approx(1.0)
    assert g.gamma0_bar == pytest.approx(2.0)
    g3 = L.gamma_constants(derived_params(3, 3, 1))
    assert (g3.alpha0, g3.beta0) == (4.0, 4.0)
    assert L.gamma_constants(derived_params(1, 0.5, 1)).gamma4_bar == pytest.approx(2.0)


def test_A0(W1, P22):
    assert L.A0(1, (0, 1), P22, W1) == pytest.approx(2 / 9, rel=1e-9)
    assert L.A0(2, (0, 1), P22, W1) == pytest.approx(0.08392878637368602, rel=1e-8)


def test_B1_and_A1(W1):
    assert L.B1((0, 1), derived_params(2, 1, 1), W1) == pytest.approx(3**-0.5, rel=1e-10)
    assert L.A1((0, 1), derived_params(1, 2, 1), W1) == pytest.approx(0.5, rel=1e-9)


def test_B0_forms_agree(W1):
    params = derived_params(3, 2, 1)
    a = L.B0(1, (0, 1), params, W1)
    b = L.B0(1, (0, 1), params, W1, by_parts=True)
    assert a == pytest.approx(b, rel=1e-8)
    assert a == pytest.approx(0.25941402165187405, rel=1e-8)


def test_K_bounds(W1, P22):
    lo, up = L.K_bounds((0, 1), P22, W1)
    assert up == pytest.approx(4 / 9, rel=1e-9)
    assert lo == pytest.approx(0.08392878637368602, rel=1e-8)
    assert L.K_bounds((0, 1), derived_params(2, 1, 1), W1) == pytest.approx((3**-0.5, 3**-0.5))
    assert L.K_bounds((2, 3), P22, W1) == (0.0, 0.0)


@pytest.mark.parametrize("pq", [(2, 2), (1, 2), (3, 2), (2, 1), (2, 0.5), (1, 0.5), (1.5, 3)])
def test_lower_le_upper(pq):
    w = Weight([(0.0, 1.0, 1.0, 1.0), (1.0, 2.0, 1.0, 0.0)])
    params = derived_params(*pq, 1)
    for I in ((0.0, 1.0), (0.25, 1.5), (1.0, inf)):
        lo, up = L.K_bounds(I, params, w)
        assert 0.0 <= lo <= up * (1 + 1e-12)


def test_monotone_in_interval(W1, P22):
    vals = [L.A0(1, (0.2, b), P22, W1) for b in (0.5, 0.8, 1.0, 2.0, inf)]
    assert all(x <= y + 1e-12 for x, y in zip(vals, vals[1:]))
    vals = [L.A0(1, (a, 1.0), P22, W1) for a in (0.0, 0.2, 0.5, 0.9)]
    assert all(x >= y - 1e-12 for x, y in zip(vals, vals[1:]))


def test_q_infinite_rejected(W1):
    with pytest.raises(RegimeError):
        L.K_bounds((0, 1), derived_params(2, inf, 1), W1)


def test_report_fields(W1, P22):
    rep = L.K_report((0.5, inf), P22, W1)
    assert rep["regime"] == "p_le_q"
    assert rep["bounds"][0] == pytest.approx(0.38188130790936, rel=1e-9)
