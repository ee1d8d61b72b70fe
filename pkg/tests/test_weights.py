import math

import pytest

from lapbound.calculus import quad
from lapbound.weights import Weight, WeightError

inf = math.inf


def test_eval(W1, box):
    assert W1(0.5) == 0.5
    assert box(2.0) == 0.0
    root = Weight.monomial(2.0, -0.5, 1.0, 4.0)
    assert root.left_limit(4.0) == pytest.approx(1.0)


def test_power_integral(W1, box):
    for t in (0.25, 0.5, 1.0):
        assert W1.power_integral(2, 0, t) == pytest.approx(t**3 / 3, rel=1e-14)
    assert box.power_integral(2, 0, 2) == 1.0
    assert Weight.monomial(1.0, -1.0, 0.5, 1.0).power_integral(2, 0.5, 1.0) == pytest.approx(1.0)


def test_divergent_integral_is_inf():
    w = Weight([(0.0, 1.0, 1.0, -0.9)])
    assert w.power_integral(2, 0, 1) == inf
    assert w.power_integral(1, 0, 1) == pytest.approx(10.0)


def test_rejects_bad_input():
    with pytest.raises(WeightError):
        Weight.monomial(1.0, 1.0, 0, 1).power_integral(0.0)
    with pytest.raises(WeightError):
        Weight([(0.0, 1.0, 1.0, -1.0)])
    with pytest.raises(WeightError):
        Weight.from_records([{"lo": 0, "hi": 1, "bogus": 2}])


def test_esup(W1):
    assert W1.esup(0, 0.3) == pytest.approx(0.3)
    assert W1.esup(0.5, 1) == 1.0
    assert Weight.monomial(1.0, -0.5, 0, 1).esup(0, 1) == inf


def test_additive_and_matches_quadrature():
    w = Weight([(0.0, 1.0, 1.0, 0.5), (1.0, 3.0, 2.0, -1.5), (3.0, inf, 1.0, -3.0)])
    for rho in (0.5, 1.0, 2.5):
        whole = w.power_integral(rho, 0.2, 5.0)
        parts = w.power_integral(rho, 0.2, 2.0) + w.power_integral(rho, 2.0, 5.0)
        assert whole == pytest.approx(parts, rel=1e-13)
        num = quad(lambda t: float(w(t)) ** rho, 0.2, 5.0, points=w.breakpoints)
        assert whole == pytest.approx(num, rel=1e-10)


def test_records_roundtrip():
    recs = [{"lo": 0, "hi": 1, "coeff": 1, "exp": 1}, {"lo": 1, "hi": "inf", "coeff": 2, "exp": -2}]
    w = Weight.from_records(recs)
    assert Weight.from_records(w.to_records()).to_records() == w.to_records()


def test_mono_integral_extreme_ratio():
    from lapbound.weights import mono_integral
    assert mono_integral(1.0, 1.0, 1e-217, 1.0) == pytest.approx(0.5, rel=1e-15)
    assert mono_integral(2.0, 5.0, 1e-300, 2.0) == pytest.approx(2.0 * 2.0**6 / 6, rel=1e-15)
    assert mono_integral(1.0, -3.0, 1e-217, 1.0) == math.inf
    assert mono_integral(1.0, -1.0 + 1e-13, 0.5, 2.0) == pytest.approx(math.log(4.0), rel=1e-10)
