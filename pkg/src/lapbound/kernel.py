"""Exponent bookkeeping and the kernel tail integral.

The tail integral ``T(z, b) = integral_0^inf (exp(-x z^lam) - exp(-x b^lam))^delta dx``
has the closed form ``B(delta z^lam / d, delta + 1) / d`` with
``d = b^lam - z^lam``.  Integer ``delta`` additionally has the binomial sum,
and an adaptive Simpson rule provides an independent check.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from . import _backend

inf = math.inf

CASES = ("i", "ii", "iii", "iv", "v", "vi", "vii")


class ParamError(ValueError):
    pass


def conjugate(p: float) -> float:
    """Hoelder conjugate ``p/(p-1)`` with ``1' = inf`` and ``inf' = 1``."""
    if p == 1.0:
        return inf
    if math.isinf(p):
        return 1.0
    return p / (p - 1.0)


def _case(p: float, q: float) -> str:
    if math.isinf(q):
        return "vii"
    if math.isinf(p):
        return "vi"
    if p == 1.0:
        return "v" if q >= 1.0 else "iv"
    if q < 1.0:
        return "iii"
    return "i" if p <= q else "ii"


@dataclass(frozen=True)
class SpaceParams:
    p: float
    q: float
    lam: float
    p_prime: float
    q_prime: float | None
    r: float | None
    theta: float
    delta: float
    case: str

    @property
    def local_regime(self) -> str | None:
        """Name of the local-norm sandwich that applies, or None."""
        p, q = self.p, self.q
        if math.isinf(p) or math.isinf(q):
            return None
        if q >= 1.0:
            if p == 1.0:
                return "p1_le_q"
            if p <= q:
                return "p_le_q"
            return "q1_lt_p" if q == 1.0 else "q_lt_p"
        return "q_lt1_p1" if p == 1.0 else "q_lt1_lt_p"

    def to_dict(self) -> dict:
        return asdict(self)


def derived_params(p: float, q: float, lam: float) -> SpaceParams:
    p, q, lam = float(p), float(q), float(lam)
    if not lam > 0.0 or math.isinf(lam):
        raise ParamError(f"lambda must be a positive finite number, got {lam}")
    if not p >= 1.0:
        raise ParamError(f"p must lie in [1, inf], got {p}")
    if not q > 0.0:
        raise ParamError(f"q must lie in (0, inf], got {q}")
    pp = conjugate(p)
    if q > 1.0:
        qp = conjugate(q)
    elif q == 1.0:
        qp = inf
    else:
        qp = None
    if p > q:
        r = q if math.isinf(p) else p * q / (p - q)
    else:
        r = None
    if math.isinf(pp) and math.isinf(q):
        theta = inf
    elif math.isinf(pp):
        theta = q
    elif math.isinf(q):
        theta = pp
    else:
        theta = pp * q / (pp + q)
    delta = 1.0 if q >= 1.0 else q
    return SpaceParams(p, q, lam, pp, qp, r, theta, delta, _case(p, q))


# -- tail integral ---------------------------------------------------------

def _check_tail_args(z, b, delta, lam):
    if not delta > 0.0:
        raise ParamError(f"delta must be positive, got {delta}")
    if not lam > 0.0:
        raise ParamError(f"lambda must be positive, got {lam}")
    z = np.asarray(z, dtype=float)
    if np.any(z <= 0.0):
        raise ParamError("z must be positive")
    if np.any(z >= b):
        raise ParamError("tail integral needs z < b")
    return z


def tail_integral(z, b: float, delta: float, lam: float):
    """``integral_0^inf (exp(-x z^lam) - exp(-x b^lam))^delta dx`` for ``0 < z < b <= inf``.

    Vectorised in ``z``.  Exact closed forms: ``z^-lam - b^-lam`` for
    ``delta = 1``, a cancellation-free product for small integer ``delta`` and
    a Beta function otherwise.
    """
    zz = _check_tail_args(z, b, delta, lam)
    out = _backend.tail_integral(zz, float(b), float(delta), float(lam))
    return float(out) if np.ndim(out) == 0 else out


def tail_scalar(z: float, b: float, delta: float, lam: float) -> float:
    """Scalar ``tail_integral`` with light checks, for use inside quadrature loops."""
    if not 0.0 < z < b:
        raise ParamError("tail integral needs 0 < z < b")
    return _backend.tail_scalar(z, b, delta, lam)


def tail_derivative_scalar(t: float, b: float, delta: float, lam: float) -> float:
    if not 0.0 < t < b:
        raise ParamError("tail derivative needs 0 < t < b")
    return _backend.tail_derivative_scalar(t, b, delta, lam)


def tail_integral_binomial(z: float, b: float, delta: int, lam: float) -> float:
    """Integer-``delta`` closed form by binomial expansion of the integrand."""
    _check_tail_args(z, b, delta, lam)
    n = int(delta)
    if n != delta:
        raise ParamError("binomial form needs an integer delta")
    if math.isinf(b):
        return 1.0 / (n * z**lam)
    zl, bl = z**lam, b**lam
    terms = [math.comb(n, j) * (-1) ** j / (j * bl + (n - j) * zl) for j in range(n + 1)]
    return math.fsum(terms)


def tail_integral_quad(z: float, b: float, delta: float, lam: float, rtol: float = 1e-11) -> float:
    """Adaptive Simpson evaluation, independent of the closed forms."""
    _check_tail_args(z, b, delta, lam)
    return float(_backend.tail_quad(float(z), float(b), float(delta), float(lam), rtol))


def tail_derivative(t, b: float, delta: float, lam: float):
    """``-d/dt tail_integral(t, b, delta, lam)``, vectorised in ``t``."""
    tt = _check_tail_args(t, b, delta, lam)
    out = _backend.tail_derivative(tt, float(b), float(delta), float(lam))
    return float(out) if np.ndim(out) == 0 else out


def tail_integral_lower_C1(lam: float, lam0: float | None = None, delta: float = 1.0) -> float:
    """``C1`` with ``tail_integral(2^k, 2^(k+1), delta, lam) >= C1 2^(-k lam)`` for all ``k``."""
    if lam0 is None:
        lam0 = 0.5 * lam
    if not 0.0 < lam0 < lam:
        raise ParamError(f"need 0 < lam0 < lam, got lam0={lam0}, lam={lam}")
    return (math.exp(-1.0) - math.exp(-(2.0**lam0))) ** delta * (1.0 - 2.0 ** (lam0 - lam))


def best_C1(lam: float, delta: float = 1.0, points: int = 32) -> tuple[float, float]:
    """Largest ``C1`` over an interior grid of ``lam0`` values; returns ``(C1, lam0)``."""
    grid = lam * np.arange(1, points + 1) / (points + 1)
    vals = [tail_integral_lower_C1(lam, float(l0), delta) for l0 in grid]
    i = int(np.argmax(vals))
    return vals[i], float(grid[i])


def laplace_kernel(x, y, lam: float, cutoff=None):
    """Dense matrix ``exp(-x_i y_j^lam)`` (minus ``exp(-x_i cutoff_j^lam)`` when given)."""
    x = np.ascontiguousarray(x, dtype=float)
    y = np.ascontiguousarray(y, dtype=float)
    if cutoff is not None:
        cutoff = np.broadcast_to(np.asarray(cutoff, dtype=float), y.shape).copy()
    return _backend.kernel_matrix(x, y, float(lam), cutoff)
