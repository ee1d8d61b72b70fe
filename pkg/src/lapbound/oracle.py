"""Dense discretization of the operator and numerical norm estimates.

Nodes are composite Gauss-Legendre rules in ``ln t`` (8 nodes per panel).
Panel edges always include the weight's breakpoints and any requested cut
points so every panel sees a smooth integrand.  The matrix

    M_pq = diag(wx^(1/q)) K diag(v wy^(1/p'))

maps ``wy^(1/p) f`` to ``wx^(1/q) Lf``; its ``l^p -> l^q`` norm approximates
the ``L^p -> L^q`` norm of the operator.  ``M_22`` is the symmetric-scaled
matrix whose singular values approximate those of the operator.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import criteria, kernel
from .kernel import SpaceParams, derived_params
from .weights import Weight

inf = math.inf

PANEL = 8
WINDOW_RTOL = 1e-4
MAX_WINDOW_OCTAVES = 20
X_LOW_OCTAVES = 24
X_HIGH_FACTOR = 40.0

_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(PANEL)


class OracleError(ValueError):
    pass


@dataclass(frozen=True)
class GridSpec:
    size: int = 256
    nx: int | None = None
    panel: int = PANEL

    @classmethod
    def of(cls, spec) -> "GridSpec":
        if spec is None:
            return cls()
        if isinstance(spec, GridSpec):
            return spec
        if isinstance(spec, dict):
            return cls(**spec)
        return cls(int(spec))


@dataclass
class DiscretizedOperator:
    params: SpaceParams
    x_grid: np.ndarray
    y_grid: np.ndarray
    wx: np.ndarray
    wy: np.ndarray
    v: np.ndarray
    kernel: np.ndarray = field(repr=False)
    window: dict
    truncation_error: dict
    interval: tuple | None = None

    @property
    def qweights(self) -> tuple:
        return self.wx, self.wy

    @property
    def matrix(self) -> np.ndarray:
        """Symmetric L^2 scaling ``sqrt(wx_i) K_ij v_j sqrt(wy_j)``."""
        return self.matrix_pq(2.0, 2.0)

    def matrix_pq(self, p: float, q: float) -> np.ndarray:
        pp = kernel.conjugate(p)
        row = self.wx ** (1.0 / q) if math.isfinite(q) else np.ones_like(self.wx)
        col = self.v * (self.wy ** (1.0 / pp) if math.isfinite(pp) else np.ones_like(self.wy))
        return row[:, None] * self.kernel * col[None, :]

    def input_scale(self, p: float) -> np.ndarray:
        """``wy^(1/p)``: maps function samples to the discrete ``l^p`` vector."""
        return self.wy ** (1.0 / p) if math.isfinite(p) else np.ones_like(self.wy)


# -- grids -----------------------------------------------------------------

def log_gauss_grid(edges, panels_per_segment) -> tuple[np.ndarray, np.ndarray]:
    """Composite Gauss-Legendre nodes and weights in ``ln t`` (weights for ``dt``)."""
    nodes, weights = [], []
    for (lo, hi), n in zip(zip(edges[:-1], edges[1:]), panels_per_segment):
        ul = np.linspace(math.log(lo), math.log(hi), n + 1)
        for a, b in zip(ul[:-1], ul[1:]):
            half = 0.5 * (b - a)
            u = 0.5 * (a + b) + half * _GL_NODES
            t = np.exp(u)
            nodes.append(t)
            weights.append(half * _GL_WEIGHTS * t)
    return np.concatenate(nodes), np.concatenate(weights)


def _allocate(edges, total_panels: int) -> list[int]:
    """Spread panels over segments in proportion to their log-length (at least one each)."""
    lengths = np.array([math.log(b / a) for a, b in zip(edges[:-1], edges[1:])])
    k = len(lengths)
    if total_panels < k:
        raise OracleError(f"grid too small: need at least {k * PANEL} nodes for {k} segments")
    extra = total_panels - k
    share = lengths / lengths.sum() * extra
    alloc = np.floor(share).astype(int)
    rest = extra - alloc.sum()
    order = np.argsort(-(share - alloc))
    alloc[order[:rest]] += 1
    return [int(a) + 1 for a in alloc]


def _outside_upper(params: SpaceParams, w: Weight, lo: float, hi: float) -> float:
    """Upper criterion value of ``v`` restricted to the complement of ``(lo, hi)``."""
    parts = []
    if lo > 0.0:
        parts.extend((p.lo, min(p.hi, lo), p.coeff, p.exp) for p in w.pieces if p.coeff and p.lo < lo)
    if math.isfinite(hi):
        parts.extend((max(p.lo, hi), p.hi, p.coeff, p.exp) for p in w.pieces if p.coeff and p.hi > hi)
    if not parts:
        return 0.0
    rep = criteria.norm_criterion(params, Weight(parts))
    return rep.upper_bound


def choose_window(params: SpaceParams, w: Weight, interval=None) -> dict:
    """y-window ``[Y0, Y1]`` and x-window ``[X0, X1]`` for the discretization.

    ``Y1`` is the end of the support when finite; otherwise both ends move
    outwards until the criterion's upper value of the cut-off weight is at
    most ``WINDOW_RTOL`` of the global one (within ``MAX_WINDOW_OCTAVES``).
    """
    lam = params.lam
    a, b = (0.0, inf) if interval is None else interval
    local = w.restricted(a, b)
    if local.is_zero():
        return {"Y0": 1.0, "Y1": 2.0, "X0": 2.0 ** -X_LOW_OCTAVES, "X1": X_HIGH_FACTOR, "y_tail": 0.0}
    pos = [p for p in local.pieces if p.coeff > 0.0]
    s_lo, s_hi = pos[0].lo, pos[-1].hi
    glob = criteria.norm_criterion(params, local).upper_bound
    target = WINDOW_RTOL * glob if math.isfinite(glob) and glob > 0 else 0.0
    inner = [x for x in local.breakpoints if x > 0.0 and math.isfinite(x)]
    ref_lo = s_lo if s_lo > 0.0 else (min(inner) if inner else 1.0)
    ref_hi = s_hi if math.isfinite(s_hi) else (max(inner) if inner else 1.0)
    y0 = s_lo if s_lo > 0.0 else ref_lo
    y1 = s_hi if math.isfinite(s_hi) else max(ref_hi, y0) * 2.0
    if s_lo == 0.0:
        for _ in range(MAX_WINDOW_OCTAVES):
            if _outside_upper(params, local, y0, inf) <= target:
                break
            y0 *= 0.5
    if not math.isfinite(s_hi):
        for _ in range(MAX_WINDOW_OCTAVES):
            if _outside_upper(params, local, 0.0, y1) <= target:
                break
            y1 *= 2.0
    tail = _outside_upper(params, local, y0, y1)
    x0 = y1 ** (-lam) * 2.0 ** -X_LOW_OCTAVES
    x1 = X_HIGH_FACTOR * y0 ** (-lam)
    return {"Y0": y0, "Y1": y1, "X0": x0, "X1": x1, "y_tail": tail}


def discretize(params: SpaceParams, w: Weight, grid_spec=None, interval=None, breaks=()) -> DiscretizedOperator:
    """Discretize the operator (or its local version on ``interval``).

    For ``interval = (a, b)`` the kernel is ``exp(-x y^lam) - exp(-x b^lam)``
    on ``a < y < b``.
    """
    spec = GridSpec.of(grid_spec)
    if interval is None and not w.is_zero():
        rep = criteria.norm_criterion(params, w)
        if rep.decision == criteria.UNBOUNDED:
            raise OracleError("operator is unbounded for these exponents")
    if spec.size < PANEL:
        raise OracleError(f"grid size must be at least {PANEL}")
    lam = params.lam
    win = choose_window(params, w, interval)
    y0, y1 = win["Y0"], win["Y1"]
    a, b = (0.0, inf) if interval is None else (float(interval[0]), float(interval[1]))
    y0, y1 = max(y0, a) if a > 0 else y0, min(y1, b)
    cuts = {x for x in list(w.breakpoints) + list(breaks) if y0 < x < y1 and math.isfinite(x)}
    y_edges = [y0, *sorted(cuts), y1]
    y, wy = log_gauss_grid(y_edges, _allocate(y_edges, spec.size // PANEL))
    nx = spec.nx or spec.size
    x_edges = [win["X0"], win["X1"]]
    x, wx = log_gauss_grid(x_edges, [nx // PANEL])
    cutoff = None if math.isinf(b) else np.full_like(y, b)
    kmat = kernel.laplace_kernel(x, y, lam, cutoff)
    vy = np.asarray(w(y), dtype=float)
    trunc = truncation_error(params, w.restricted(a, b), win)
    return DiscretizedOperator(params, x, y, wx, wy, vy, kmat, win, trunc,
                               None if interval is None else (a, b))


def truncation_error(params: SpaceParams, w: Weight, win: dict) -> dict:
    """Bounds on the norm lost by cutting the x- and y-axes to the window."""
    q, lam, pp = params.q, params.lam, params.p_prime
    vnorm = w.esup() if math.isinf(pp) else w.integral(rho=pp) ** (1.0 / pp)
    x0, x1, y0, y1 = win["X0"], win["X1"], win["Y0"], win["Y1"]
    if math.isinf(q):
        x_low = vnorm * min(1.0, x0 * y1**lam)
        x_high = 0.0
    else:
        x_low = x0 ** (1.0 / q) * vnorm
        x_high = vnorm * (math.exp(-q * x1 * y0**lam) / (q * y0**lam)) ** (1.0 / q)
    return {"y_tail": win["y_tail"], "x_low": x_low, "x_high": x_high,
            "total": win["y_tail"] + x_low + x_high}


# -- spectra and norms -----------------------------------------------------

def singular_values(op, count: int | None = None) -> np.ndarray:
    """Nonincreasing singular values of the L^2-scaled matrix."""
    mat = op.matrix if isinstance(op, DiscretizedOperator) else np.asarray(op, dtype=float)
    if mat.size == 0:
        return np.zeros(0)
    sv = np.linalg.svd(mat, compute_uv=False)
    return sv if count is None else sv[:count]


@dataclass
class NormEstimate:
    value: float
    witness: np.ndarray = field(repr=False)
    method: str
    exact: bool

    def to_dict(self) -> dict:
        return {"value": self.value, "method": self.method, "exact": self.exact}


def _lp(x: np.ndarray, p: float) -> float:
    a = np.abs(x)
    if math.isinf(p):
        return float(a.max()) if a.size else 0.0
    if p == 1.0:
        return float(a.sum())
    m = a.max() if a.size else 0.0
    if m == 0.0:
        return 0.0
    return float(m * np.sum((a / m) ** p) ** (1.0 / p))


def ratio(mat: np.ndarray, f: np.ndarray, p: float, q: float) -> float:
    den = _lp(f, p)
    return 0.0 if den == 0.0 else _lp(mat @ f, q) / den


def _psi(x: np.ndarray, r: float) -> np.ndarray:
    return np.sign(x) * np.abs(x) ** (r - 1.0)


def _boyd(mat, f, p, q, iters, tol):
    pp = kernel.conjugate(p)
    best_f, best = f, ratio(mat, f, p, q)
    for _ in range(iters):
        y = mat @ f
        if not np.any(y):
            break
        g = _psi(mat.T @ _psi(y / _lp(y, q), q), pp)
        nrm = _lp(g, p)
        if nrm == 0.0:
            break
        f = g / nrm
        val = ratio(mat, f, p, q)
        if val > best:
            improved = val - best
            best_f, best = f, val
            if improved <= tol * best:
                break
        else:
            break
    return best, best_f


def _cone_ascent(mat, g, p, q, iters, tol):
    """Exponentiated-gradient ascent of ``||M g^(1/p)||_q`` over the simplex.

    For ``q <= 1`` and a nonnegative matrix the objective is concave in ``g``,
    so the ascent targets the global maximum on the nonnegative cone.
    """
    def obj(gv):
        return _lp(mat @ gv ** (1.0 / p), q)

    g = g / g.sum()
    cur = obj(g)
    eta = 1.0
    for _ in range(iters):
        f = g ** (1.0 / p)
        y = mat @ f
        if cur == 0.0:
            break
        grad = (mat.T @ (y ** (q - 1.0))) * f / np.maximum(g, 1e-300) / p * cur ** (1.0 - q)
        scale = np.max(np.abs(grad))
        if scale == 0.0:
            break
        while eta > 1e-12:
            step = np.clip(eta * grad / scale, -50.0, 50.0)
            cand = g * np.exp(step)
            cand /= cand.sum()
            val = obj(cand)
            if val > cur:
                break
            eta *= 0.5
        else:
            break
        gain = val - cur
        g, cur = cand, val
        eta = min(eta * 2.0, 1e3)
        if gain <= tol * cur:
            break
    f = g ** (1.0 / p)
    return ratio(mat, f, p, q), f


def operator_norm_pq(op, p: float, q: float, restarts: int = 8, seed: int = 0, iters: int = 2000,
                     tol: float = 1e-12) -> NormEstimate:
    """Norm of the discrete ``l^p -> l^q`` map (exact where a formula exists).

    Exact cases: ``p = 1`` (largest column), ``q = inf`` (largest row),
    ``p = q = 2`` (largest singular value), and for nonnegative matrices
    ``q = 1`` and ``p = inf``.  Otherwise a multi-start ascent returns the
    ratio attained by its best witness: a lower bound on the discrete norm.
    """
    if isinstance(op, DiscretizedOperator):
        mat = op.matrix_pq(p, q)
    else:
        mat = np.asarray(op, dtype=float)
    m, n = mat.shape
    if not np.any(mat):
        return NormEstimate(0.0, np.zeros(n), "zero", True)
    nonneg = bool(np.all(mat >= 0.0))
    pp = kernel.conjugate(p)
    if p == 1.0 and q >= 1.0:
        cols = np.array([_lp(mat[:, j], q) for j in range(n)])
        j = int(np.argmax(cols))
        e = np.zeros(n)
        e[j] = 1.0
        return NormEstimate(ratio(mat, e, p, q), e, "max-column", True)
    if math.isinf(q):
        rows = np.array([_lp(mat[i], pp) for i in range(m)])
        i = int(np.argmax(rows))
        r = mat[i]
        f = np.sign(r) * (np.abs(r) ** (pp - 1.0) if math.isfinite(pp) else 1.0) if math.isfinite(p) else np.sign(r)
        return NormEstimate(ratio(mat, f, p, q), f, "max-row", True)
    if p == 2.0 and q == 2.0:
        u, s, vt = np.linalg.svd(mat, full_matrices=False)
        f = vt[0]
        return NormEstimate(float(s[0]), f, "svd", True)
    if nonneg and q == 1.0:
        col = mat.sum(axis=0)
        f = col ** (pp - 1.0) if math.isfinite(pp) else np.ones(n)
        return NormEstimate(ratio(mat, f, p, q), f, "column-sum", True)
    if nonneg and math.isinf(p):
        f = np.ones(n)
        return NormEstimate(ratio(mat, f, p, q), f, "ones", True)
    rng = np.random.default_rng(seed)
    starts = [np.ones(n)]
    _, _, vt = np.linalg.svd(mat, full_matrices=False)
    starts.append(np.abs(vt[0]) + 1e-12)
    starts.append(mat.sum(axis=0) + 1e-300)
    while len(starts) < restarts:
        starts.append(rng.random(n) + 1e-3 if nonneg or q < 1.0 else rng.standard_normal(n))
    best, best_f = -1.0, None
    cone = q <= 1.0 and nonneg
    for f0 in starts:
        if cone:
            val, f = _cone_ascent(mat, np.abs(f0) ** p + 1e-300, p, q, iters, tol)
        else:
            val, f = _boyd(mat, f0 / _lp(f0, p), p, q, iters, tol)
        if val > best:
            best, best_f = val, f
    return NormEstimate(best, best_f, "cone-ascent" if cone else "power-iteration", False)


# -- special matrices ------------------------------------------------------

def volterra_matrix(n: int, xi: float = 1.0, zeta: float = 1.0, interval=(0.0, 1.0), p: float = 2.0,
                    q: float = 2.0) -> np.ndarray:
    """Midpoint discretization of ``zeta * integral_a^t xi f`` on ``interval``.

    Scaled for ``l^p -> l^q``; the diagonal gets weight 1/2.
    """
    a, b = interval
    h = (b - a) / n
    mat = np.tril(np.ones((n, n)))
    np.fill_diagonal(mat, 0.5)
    pp = kernel.conjugate(p)
    scale = h ** (1.0 / q if math.isfinite(q) else 0.0) * h ** (1.0 / pp if math.isfinite(pp) else 0.0)
    return xi * zeta * scale * mat


def finite_rank_matrix(op: DiscretizedOperator, points, p: float = 2.0, q: float = 2.0) -> np.ndarray:
    """Matrix of ``Pf(x) = sum_n exp(-x c_{n+1}^lam) integral_{I_n} f v`` on the operator's grid."""
    pts = np.asarray(points, dtype=float)
    idx = np.searchsorted(pts, op.y_grid, side="right")
    right = pts[np.minimum(idx, pts.size - 1)]
    lam = op.params.lam
    with np.errstate(over="ignore", under="ignore"):
        kmat = np.where(np.isinf(right)[None, :], 0.0, np.exp(-np.outer(op.x_grid, np.where(np.isinf(right), 1.0, right) ** lam)))
    pp = kernel.conjugate(p)
    row = op.wx ** (1.0 / q) if math.isfinite(q) else np.ones_like(op.wx)
    col = op.v * (op.wy ** (1.0 / pp) if math.isfinite(pp) else np.ones_like(op.wy))
    return row[:, None] * kmat * col[None, :]


def residual_matrix(op: DiscretizedOperator, points, p: float = 2.0, q: float = 2.0) -> np.ndarray:
    return op.matrix_pq(p, q) - finite_rank_matrix(op, points, p, q)


def local_norm(params: SpaceParams, w: Weight, interval, grid_spec=None, restarts: int = 8, seed: int = 0) -> dict:
    """Oracle estimate of the local norm ``K(I)``."""
    op = discretize(params, w, grid_spec, interval=interval)
    est = operator_norm_pq(op, params.p, params.q, restarts=restarts, seed=seed)
    return {"value": est.value, "method": est.method, "exact_discrete": est.exact,
            "truncation_error": op.truncation_error["total"]}


def rank(mat: np.ndarray, rtol: float = 1e-10) -> int:
    sv = singular_values(mat)
    return int(np.sum(sv > rtol * sv[0])) if sv.size and sv[0] > 0 else 0


def l2_params(lam: float) -> SpaceParams:
    return derived_params(2.0, 2.0, lam)
