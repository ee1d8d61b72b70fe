"""Epsilon-partitions of the half-line and the finite-rank approximant ``P``.

Each interval ``I_n = (c_n, c_{n+1})`` of the partition has local norm at most
``epsilon``; the number of splits ``N`` then bounds the approximation number
``a_{N+1}``.  Local norms are replaced by the regime's upper sandwich value,
which keeps the ``a_n`` bound valid at the cost of a possibly larger ``N``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from . import criteria
from .calculus import quad
from .kernel import SpaceParams
from .localnorm import K_upper, RegimeError
from .weights import Weight

inf = math.inf

LOG_TOL = 1e-8
K_RTOL = 1e-6
MAX_INTERVALS = 10_000
_MAX_DOUBLINGS = 400
SURROGATE = "upper-bound-split"


class PartitionError(ValueError):
    pass


@dataclass(frozen=True)
class Partition:
    epsilon: float
    points: tuple
    u: tuple
    surrogate: str = SURROGATE
    orientation: str = "left-to-right"
    evaluations: int = field(default=0, compare=False)

    @property
    def N(self) -> int:
        return len(self.points) - 2

    @property
    def intervals(self) -> list:
        return list(zip(self.points[:-1], self.points[1:]))

    def to_dict(self) -> dict:
        return {
            "epsilon": self.epsilon,
            "N": self.N,
            "points": list(self.points),
            "u": list(self.u),
            "surrogate": self.surrogate,
            "orientation": self.orientation,
        }


def _check_compact(params: SpaceParams, w: Weight):
    if params.local_regime is None:
        raise RegimeError("partitions need 1 <= p < inf and 0 < q < inf")
    verdict = criteria.compactness_test(params, w)
    if verdict in (criteria.NOT_COMPACT, criteria.NEVER):
        raise PartitionError("operator is not compact")
    if verdict == criteria.EQUIVALENT:
        rep = criteria.norm_criterion(params, w)
        if rep.decision == criteria.UNBOUNDED:
            raise PartitionError("operator is unbounded, hence not compact")


def _start_point(w: Weight) -> float:
    bps = [x for x in w.breakpoints if x > 0.0]
    return bps[0] if bps else 1.0


def _bisect(k_of, lo: float, hi: float, eps: float) -> tuple[float, float, int]:
    """Bisect ``u`` in ``(lo, hi)`` with ``k_of(lo) <= eps < k_of(hi)``.

    Returns the accepted ``u`` (on the ``<= eps`` side), its value and the
    number of evaluations.
    """
    k_lo, n = k_of(lo), 1
    while hi - lo > LOG_TOL and k_lo < eps * (1.0 - K_RTOL):
        mid = 0.5 * (lo + hi)
        k_mid = k_of(mid)
        n += 1
        if k_mid <= eps:
            lo, k_lo = mid, k_mid
        else:
            hi = mid
    return lo, k_lo, n


def split(epsilon: float, params: SpaceParams, w: Weight) -> Partition:
    """Greedy partition with ``K_upper(I_n) <= epsilon`` on every interval.

    Every interval except the slack one has ``K_upper`` within ``K_RTOL`` of
    ``epsilon`` (or is bisection-limited to ``LOG_TOL`` in ``log b``).  The
    slack interval is the last for ``q >= 1`` and the first for ``q < 1``.
    """
    if not epsilon > 0.0:
        raise PartitionError("epsilon must be positive")
    _check_compact(params, w)
    total = K_upper((0.0, inf), params, w)
    if total <= epsilon:
        return Partition(float(epsilon), (0.0, inf), (total,), evaluations=1)
    if params.q >= 1.0:
        return _sweep_right(epsilon, params, w)
    return _sweep_left(epsilon, params, w)


def _sweep_right(eps: float, params: SpaceParams, w: Weight) -> Partition:
    points, u, evals = [0.0], [], 1
    c = 0.0
    while True:
        tail = K_upper((c, inf), params, w)
        evals += 1
        if tail <= eps:
            points.append(inf)
            u.append(tail)
            break
        if len(points) > MAX_INTERVALS:
            raise PartitionError("partition did not terminate; operator may not be compact")

        def k_of(ub, c=c):
            b = math.exp(ub)
            return 0.0 if b <= c else K_upper((c, b), params, w)

        if c == 0.0:
            # K((0, b)) -> 0 as b -> 0 for a compact operator
            lo = math.log(_start_point(w))
            n = 0
            while k_of(lo) > eps:
                lo -= 1.0
                n += 1
                if n > _MAX_DOUBLINGS:
                    raise PartitionError("local norm does not vanish near 0")
            hi = lo + 1.0
        else:
            lo = math.log(c)
            hi = lo + 1.0
        n = 0
        while k_of(hi) <= eps:
            lo, hi = hi, hi + 1.0 + n
            n += 1
            if n > _MAX_DOUBLINGS:
                raise PartitionError("could not bracket the next split point")
        ub, kv, m = _bisect(k_of, lo, hi, eps)
        evals += m + n
        b = math.exp(ub)
        if b <= c:
            raise PartitionError(f"bisection stalled at c={c}")
        points.append(b)
        u.append(kv)
        c = b
    return Partition(float(eps), tuple(points), tuple(u), evaluations=evals)


def _sweep_left(eps: float, params: SpaceParams, w: Weight) -> Partition:
    points, u, evals = [inf], [], 1
    c = inf
    while True:
        head = K_upper((0.0, c), params, w)
        evals += 1
        if head <= eps:
            points.append(0.0)
            u.append(head)
            break
        if len(points) > MAX_INTERVALS:
            raise PartitionError("partition did not terminate; operator may not be compact")

        # bisect on -log(a) so that increasing the variable widens the interval
        def k_of(ua, c=c):
            a = math.exp(-ua)
            return 0.0 if a >= c else K_upper((a, c), params, w)

        if math.isinf(c):
            lo = -math.log(max(w.breakpoints[-1] if w.breakpoints else 1.0, 1e-300))
            n = 0
            while k_of(lo) > eps:
                lo -= 1.0
                n += 1
                if n > _MAX_DOUBLINGS:
                    raise PartitionError("local norm does not vanish near infinity")
            hi = lo + 1.0
        else:
            lo = -math.log(c)
            hi = lo + 1.0
        n = 0
        while k_of(hi) <= eps:
            lo, hi = hi, hi + 1.0 + n
            n += 1
            if n > _MAX_DOUBLINGS:
                raise PartitionError("could not bracket the next split point")
        ua, kv, m = _bisect(k_of, lo, hi, eps)
        evals += m + n
        a = math.exp(-ua)
        if a >= c:
            raise PartitionError(f"bisection stalled at c={c}")
        points.append(a)
        u.append(kv)
        c = a
    return Partition(float(eps), tuple(reversed(points)), tuple(reversed(u)), orientation="right-to-left",
                     evaluations=evals)


def interval_integrals(part: Partition, f: Callable[[float], float], w: Weight) -> np.ndarray:
    """``integral_{I_n} f v`` for every interval of the partition."""
    out = []
    for a, b in part.intervals:
        pts = [x for x in w.breakpoints if a < x < b]

        def g(t):
            vt = float(w(t))
            return 0.0 if vt == 0.0 else f(t) * vt

        out.append(quad(g, a, b, points=pts))
    return np.array(out)


def apply_finite_rank(part: Partition, f: Callable[[float], float], x, lam: float, w: Weight):
    """``Pf(x) = sum_n exp(-x c_{n+1}^lam) integral_{I_n} f v``; the last term vanishes."""
    ints = interval_integrals(part, f, w)[:-1]
    ends = np.array(part.points[1:-1], dtype=float)
    xs = np.asarray(x, dtype=float)
    if ends.size == 0:
        return np.zeros_like(xs) if xs.ndim else 0.0
    vals = np.exp(-np.multiply.outer(xs, ends**lam)) @ ints
    return float(vals) if xs.ndim == 0 else vals


def an_upper(part: Partition, params: SpaceParams) -> float:
    """Bound on ``a_{N+1}`` implied by the partition."""
    eps, n = part.epsilon, part.N + 1
    regime = params.local_regime
    if regime is None:
        raise RegimeError("no approximation-number bound for this regime")
    if params.q >= 1.0:
        if params.p == 1.0:
            return eps
        return eps * n ** (1.0 / params.p_prime)
    if params.p == 1.0:
        return eps * n ** ((1.0 - params.q) / params.q)
    return eps * n ** (1.0 / params.r)


def an_curve(eps_grid: Sequence[float], params: SpaceParams, w: Weight) -> list[dict]:
    """Rows ``(epsilon, N, n, bound)`` over a strictly decreasing grid."""
    grid = [float(e) for e in eps_grid]
    if any(b >= a for a, b in zip(grid, grid[1:])):
        raise PartitionError("epsilon grid must be strictly decreasing")
    rows = []
    for eps in grid:
        part = split(eps, params, w)
        rows.append({"epsilon": eps, "N": part.N, "n": part.N + 1, "bound": an_upper(part, params)})
    return rows
