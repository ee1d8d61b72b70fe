import math

import numpy as np
import pytest

from lapbound import partition as P
from lapbound.kernel import derived_params
from lapbound.partition import PartitionError
from lapbound.weights import Weight

inf = math.inf

# frozen output of the bisection sweep for W1 at p = q = 2, epsilon = 0.2
EPS02_POINTS = [0.0, 0.4499995734513976, 0.6963521020960525, 0.9260983545249166, 1.1707220186246823, inf]


def test_trivial_partition(W1, P22):
    part = P.split(2.0, P22, W1)
    assert part.points == (0.0, inf) and part.N == 0
    assert P.an_curve([2.0], P22, W1) == [{"epsilon": 2.0, "N": 0, "n": 1, "bound": 2.0}]


def test_regression_eps_02(W1, P22):
    part = P.split(0.2, P22, W1)
    assert part.N == 4
    assert part.points[:-1] == pytest.approx(EPS02_POINTS[:-1], rel=1e-7)
    assert part.points[-1] == inf
    assert all(0.2 * (1 - 1e-6) <= u <= 0.2 for u in part.u[:-1])
    assert part.u[-1] <= 0.2
    assert part.surrogate == "upper-bound-split"


def test_an_curve_fixture(W1, P22):
    rows = P.an_curve([0.4, 0.2, 0.1], P22, W1)
    assert [r["N"] for r in rows] == [2, 4, 8]
    assert [r["bound"] for r in rows] == pytest.approx([0.4 * 3**0.5, 0.2 * 5**0.5, 0.3])


def test_refinement(W1, P22):
    coarse = P.split(0.4, P22, W1)
    fine = P.split(0.2, P22, W1)
    for a, b in coarse.intervals:
        inside = [c for c in fine.points if a < c < b]
        sub = any(fa <= a and b <= fb for fa, fb in fine.intervals)
        assert inside or sub


def test_finite_rank(W1):
    part = P.Partition(1.0, (0.0, 1.0, inf), (1.0, 0.0))
    f = lambda y: 1.0 if y < 1 else 0.0
    assert P.apply_finite_rank(part, f, 1.0, 1.0, W1) == pytest.approx(math.exp(-1) / 2, rel=1e-12)
    triv = P.Partition(1.0, (0.0, inf), (0.0,))
    assert P.apply_finite_rank(triv, f, 1.0, 1.0, W1) == 0.0
    g = lambda y: y
    xs = np.array([0.5, 1.0, 2.0])
    lhs = P.apply_finite_rank(part, lambda y: f(y) + g(y), xs, 1.0, W1)
    rhs = P.apply_finite_rank(part, f, xs, 1.0, W1) + P.apply_finite_rank(part, g, xs, 1.0, W1)
    assert lhs == pytest.approx(rhs, rel=1e-12)


def test_an_upper_branches():
    mk = lambda n, eps: P.Partition(eps, tuple([0.0] + [float(i + 1) for i in range(n)] + [inf]), (eps,) * (n + 1))
    assert P.an_upper(mk(5, 0.3), derived_params(1, 2, 1)) == pytest.approx(0.3)
    assert P.an_upper(mk(3, 0.1), derived_params(2, 2, 1)) == pytest.approx(0.2)
    assert P.an_upper(mk(1, 0.1), derived_params(2, 0.5, 1)) == pytest.approx(0.1 * 2**1.5)
    assert P.an_upper(mk(1, 0.1), derived_params(1, 0.5, 1)) == pytest.approx(0.2)


def test_q_lt_1_sweeps_right_to_left():
    w = Weight.monomial(1.0, 0.0, 1.0, 2.0)
    part = P.split(3.0, derived_params(2, 0.5, 1), w)
    assert part.orientation == "right-to-left"
    assert part.u[0] <= 3.0
    assert all(3.0 * (1 - 1e-6) <= u <= 3.0 for u in part.u[1:])
    assert P.an_upper(part, derived_params(2, 0.5, 1)) == pytest.approx(3.0 * (part.N + 1) ** 1.5)


def test_errors(W1, P22):
    with pytest.raises(PartitionError):
        P.split(0.1, P22, Weight.monomial())
    with pytest.raises(PartitionError):
        P.split(0.0, P22, W1)
    with pytest.raises(PartitionError):
        P.an_curve([0.1, 0.2], P22, W1)
