import math

import pytest

from lapbound import kernel
from lapbound.kernel import ParamError, derived_params

inf = math.inf


def test_derived_params():
    p = derived_params(2, 2, 1)
    assert (p.p_prime, p.theta, p.delta, p.r) == (2.0, 1.0, 1.0, None)
    p = derived_params(3, 2, 1)
    assert p.p_prime == pytest.approx(1.5)
    assert p.r == pytest.approx(6.0)
    assert p.theta == pytest.approx(6 / 7)
    p = derived_params(2, 0.5, 1)
    assert p.delta == 0.5
    assert p.r == pytest.approx(2 / 3)
    with pytest.raises(ParamError):
        derived_params(2, 2, 0)


def test_tail_closed_forms():
    assert kernel.tail_integral(1, 2, 1, 1) == pytest.approx(0.5)
    assert kernel.tail_integral(1, inf, 1, 2) == pytest.approx(1.0)
    assert kernel.tail_integral(1, 2, 2, 1) == pytest.approx(1 / 12, rel=1e-13)
    assert kernel.tail_integral_binomial(1, 2, 2, 1) == pytest.approx(1 / 12, rel=1e-13)


def test_tail_half_power_regression():
    # integral of sqrt(u - u^2)/u over (0,1) = B(1/2, 3/2)
    assert kernel.tail_integral(1, 2, 0.5, 1) == pytest.approx(math.pi / 2, rel=1e-12)
    assert kernel.tail_integral_quad(1, 2, 0.5, 1) == pytest.approx(math.pi / 2, rel=1e-9)


def test_tail_rejects_bad_order():
    with pytest.raises(ParamError):
        kernel.tail_integral(2, 1, 1, 1)


def test_C1_formula():
    c = kernel.tail_integral_lower_C1(1, 0.5)
    assert c == pytest.approx((math.exp(-1) - math.exp(-math.sqrt(2))) * (1 - 2**-0.5), rel=1e-14)
    assert kernel.tail_integral_lower_C1(2, 1) == pytest.approx((math.exp(-1) - math.exp(-2)) * 0.5, rel=1e-14)
    with pytest.raises(ParamError):
        kernel.tail_integral_lower_C1(1, 1.5)


@pytest.mark.parametrize("lam,delta", [(1.0, 1.0), (2.0, 1.0), (1.0, 0.5), (0.7, 2.0)])
def test_C1_sandwich(lam, delta):
    c1 = kernel.tail_integral_lower_C1(lam, lam / 2, delta)
    best, _ = kernel.best_C1(lam, delta)
    assert best >= c1
    for k in range(-5, 6):
        t = kernel.tail_integral(2.0**k, 2.0 ** (k + 1), delta, lam)
        assert best * 2.0 ** (-k * lam) <= t <= 2.0 ** (-k * lam) / delta


def test_monotone_and_homogeneous():
    t = [kernel.tail_integral(z, 3.0, 0.7, 1.3) for z in (0.5, 1.0, 2.0)]
    assert t[0] > t[1] > t[2]
    assert kernel.tail_integral(1.0, 2.0, 0.7, 1.3) < kernel.tail_integral(1.0, 4.0, 0.7, 1.3)
    c = 3.7
    assert kernel.tail_integral(c, 2 * c, 0.7, 1.3) == pytest.approx(c**-1.3 * kernel.tail_integral(1, 2, 0.7, 1.3),
                                                                     rel=1e-12)


def test_tail_derivative_matches_difference():
    h = 1e-6
    for delta in (0.5, 1.0, 2.0):
        num = -(kernel.tail_integral(1 + h, 2, delta, 1) - kernel.tail_integral(1 - h, 2, delta, 1)) / (2 * h)
        assert kernel.tail_derivative(1.0, 2, delta, 1) == pytest.approx(num, rel=1e-6)
