"""Piecewise-power weights.

A weight is ``v(y) = c_i * y**beta_i`` on ``[lo_i, hi_i)``, zero where no
piece is given.  The family is closed under ``v -> v**rho``, multiplication by
powers of ``y`` and running suprema, and every integral or essential supremum
the bounds need has a closed form on it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

inf = math.inf


class WeightError(ValueError):
    """Invalid weight specification."""


def mono_integral(coeff: float, gamma: float, s: float, e: float) -> float:
    """``coeff * integral_s^e t**gamma dt`` with exact ``inf`` on divergence."""
    if coeff == 0.0 or e <= s:
        return 0.0
    g = gamma + 1.0
    if s == 0.0 and g <= 0.0:
        return inf
    if math.isinf(e) and g >= 0.0:
        return inf
    if g == 0.0:
        return coeff * math.log(e / s)
    if s == 0.0:
        return coeff * e**g / g
    if math.isinf(e):
        return -coeff * s**g / g
    # factor out the larger endpoint power; expm1 keeps precision when g ~ 0 or e ~ s
    span = math.log(e / s)
    if g > 0.0:
        return coeff * e**g * -math.expm1(-g * span) / g
    try:
        return coeff * s**g * math.expm1(g * span) / g
    except OverflowError:
        return math.copysign(inf, coeff)


@dataclass(frozen=True)
class Piece:
    lo: float
    hi: float
    coeff: float
    exp: float

    def value(self, y):
        return self.coeff * np.power(y, self.exp)

    def sup(self, s: float, e: float) -> float:
        """Supremum of ``c y^beta`` over ``(s, e)`` (limits included)."""
        if self.coeff == 0.0:
            return 0.0
        if self.exp > 0.0:
            return inf if math.isinf(e) else self.coeff * e**self.exp
        if self.exp == 0.0:
            return self.coeff
        return inf if s == 0.0 else self.coeff * s**self.exp


class PiecewisePower:
    """Nonnegative function that is a monomial on each of finitely many pieces.

    Pieces are kept sorted and gap-free on ``(0, inf)``; gaps are filled with
    zero pieces so every point has an owning piece.
    """

    def __init__(self, pieces: Iterable[Piece | Sequence[float]]):
        raw = [p if isinstance(p, Piece) else Piece(*map(float, p)) for p in pieces]
        raw.sort(key=lambda p: p.lo)
        filled: list[Piece] = []
        cursor = 0.0
        for p in raw:
            if not (p.lo >= 0.0 and p.hi > p.lo):
                raise WeightError(f"bad piece support [{p.lo}, {p.hi})")
            if p.coeff < 0.0 or math.isnan(p.coeff) or math.isnan(p.exp):
                raise WeightError("piece coefficients must be nonnegative numbers")
            if p.lo < cursor:
                raise WeightError("pieces overlap")
            if p.lo > cursor:
                filled.append(Piece(cursor, p.lo, 0.0, 0.0))
            filled.append(p)
            cursor = p.hi
        if not math.isinf(cursor):
            filled.append(Piece(cursor, inf, 0.0, 0.0))
        self.pieces: tuple[Piece, ...] = tuple(self._merge_zeros(filled))

    @staticmethod
    def _merge_zeros(pieces):
        out: list[Piece] = []
        for p in pieces:
            if p.coeff == 0.0:
                p = Piece(p.lo, p.hi, 0.0, 0.0)
                if out and out[-1].coeff == 0.0:
                    out[-1] = Piece(out[-1].lo, p.hi, 0.0, 0.0)
                    continue
            out.append(p)
        return out

    # -- structure -------------------------------------------------------
    @property
    def breakpoints(self) -> list[float]:
        """Interior piece boundaries (positive and finite)."""
        return [p.lo for p in self.pieces[1:]]

    def is_zero(self) -> bool:
        return all(p.coeff == 0.0 for p in self.pieces)

    def segments(self, a: float, b: float):
        """Yield ``(piece, s, e)`` for the pieces meeting ``(a, b)``."""
        for p in self.pieces:
            s, e = max(p.lo, a), min(p.hi, b)
            if e > s:
                yield p, s, e

    def leading_at_zero(self) -> Piece:
        return self.pieces[0]

    def leading_at_inf(self) -> Piece:
        return self.pieces[-1]

    # -- pointwise -------------------------------------------------------
    def _index(self, y):
        los = np.array([p.lo for p in self.pieces])
        return np.searchsorted(los, y, side="right") - 1

    def __call__(self, y):
        y = np.asarray(y, dtype=float)
        idx = self._index(y)
        coeff = np.array([p.coeff for p in self.pieces])[idx]
        expo = np.array([p.exp for p in self.pieces])[idx]
        with np.errstate(divide="ignore", invalid="ignore"):
            out = np.where(coeff == 0.0, 0.0, coeff * np.power(y, expo))
        return out if out.ndim else float(out)

    def left_limit(self, y: float) -> float:
        for p in self.pieces:
            if p.lo < y <= p.hi:
                return float(p.value(y)) if p.coeff else 0.0
        return 0.0

    def right_limit(self, y: float) -> float:
        for p in self.pieces:
            if p.lo <= y < p.hi:
                return float(p.value(y)) if p.coeff else 0.0
        return 0.0

    def usc(self, y: float) -> float:
        """Upper semicontinuous envelope: max of the one-sided limits."""
        return max(self.left_limit(y), self.right_limit(y))

    # -- closed forms ----------------------------------------------------
    def integral(self, a: float = 0.0, b: float = inf, rho: float = 1.0, alpha: float = 0.0) -> float:
        """``integral_a^b t**alpha f(t)**rho dt`` (``inf`` when divergent)."""
        total = 0.0
        for p, s, e in self.segments(a, b):
            if p.coeff == 0.0:
                continue
            total += mono_integral(p.coeff**rho, p.exp * rho + alpha, s, e)
            if math.isinf(total):
                return inf
        return total

    def esup(self, a: float = 0.0, b: float = inf) -> float:
        return max((p.sup(s, e) for p, s, e in self.segments(a, b)), default=0.0)

    def power(self, rho: float) -> "PiecewisePower":
        return PiecewisePower(Piece(p.lo, p.hi, p.coeff**rho if p.coeff else 0.0, p.exp * rho) for p in self.pieces)

    def times_power(self, alpha: float, scale: float = 1.0) -> "PiecewisePower":
        return PiecewisePower(Piece(p.lo, p.hi, p.coeff * scale, p.exp + alpha) for p in self.pieces)

    def sup_with_witness(self, a: float = 0.0, b: float = inf) -> tuple[float, float]:
        best, where = 0.0, a
        for p, s, e in self.segments(a, b):
            val = p.sup(s, e)
            if val > best:
                best = val
                where = e if p.exp > 0 else s
        return best, where

    def limit_at_zero(self) -> float:
        p = self.pieces[0]
        if p.coeff == 0.0 or p.exp > 0.0:
            return 0.0
        return p.coeff if p.exp == 0.0 else inf

    def limit_at_inf(self) -> float:
        p = self.pieces[-1]
        if p.coeff == 0.0 or p.exp < 0.0:
            return 0.0
        return p.coeff if p.exp == 0.0 else inf

    def running_esup(self, a: float = 0.0) -> "PiecewisePower":
        """``t -> esup_{a<x<t} f(x)`` on ``(a, inf)`` (zero below ``a``)."""
        out: list[Piece] = []
        level = 0.0
        for p, s, e in self.segments(a, inf):
            if p.coeff == 0.0 or p.exp == 0.0:
                level = max(level, p.coeff)
                out.append(Piece(s, e, level, 0.0))
            elif p.exp < 0.0:
                level = max(level, p.sup(s, e))
                if math.isinf(level):
                    out.append(Piece(s, e, inf, 0.0))
                else:
                    out.append(Piece(s, e, level, 0.0))
            else:
                start = p.coeff * s**p.exp
                if start >= level:
                    out.append(Piece(s, e, p.coeff, p.exp))
                else:
                    cross = (level / p.coeff) ** (1.0 / p.exp)
                    if cross >= e:
                        out.append(Piece(s, e, level, 0.0))
                    else:
                        out.append(Piece(s, cross, level, 0.0))
                        out.append(Piece(cross, e, p.coeff, p.exp))
                level = max(level, p.sup(s, e))
        return _RawPiecewise(out)

    def to_records(self) -> list[dict]:
        return [
            {"lo": p.lo, "hi": p.hi, "coeff": p.coeff, "exp": p.exp}
            for p in self.pieces
            if p.coeff != 0.0
        ]

    def __repr__(self):
        body = ", ".join(f"{p.coeff:g}*y^{p.exp:g} on [{p.lo:g},{p.hi:g})" for p in self.pieces if p.coeff)
        return f"{type(self).__name__}({body or '0'})"


class _RawPiecewise(PiecewisePower):
    """Piecewise function whose pieces may carry ``inf`` levels (running esups)."""

    def __init__(self, pieces):
        self.pieces = tuple(pieces) if pieces else (Piece(0.0, inf, 0.0, 0.0),)
        if self.pieces[0].lo > 0.0:
            self.pieces = (Piece(0.0, self.pieces[0].lo, 0.0, 0.0),) + self.pieces


class Weight(PiecewisePower):
    """Piecewise-power weight ``v >= 0``, locally integrable on ``[0, inf)``."""

    def __init__(self, pieces):
        super().__init__(pieces)
        first = self.pieces[0]
        if first.coeff > 0.0 and first.exp <= -1.0:
            raise WeightError("weight is not integrable near 0 (need exponent > -1 on the first piece)")
        for p in self.pieces:
            if math.isinf(p.coeff):
                raise WeightError("piece coefficients must be finite")

    @classmethod
    def from_records(cls, records: Sequence[dict]) -> "Weight":
        pieces = []
        for rec in records:
            if not isinstance(rec, dict):
                raise WeightError(f"weight piece must be a mapping, got {rec!r}")
            extra = set(rec) - {"lo", "hi", "coeff", "exp"}
            if extra:
                raise WeightError(f"unknown weight keys: {sorted(extra)}")
            try:
                pieces.append(Piece(_num(rec["lo"]), _num(rec["hi"]), _num(rec.get("coeff", 1.0)), _num(rec.get("exp", 0.0))))
            except KeyError as exc:
                raise WeightError(f"weight piece missing {exc}") from None
        return cls(pieces)

    @classmethod
    def monomial(cls, coeff: float = 1.0, exp: float = 0.0, lo: float = 0.0, hi: float = inf) -> "Weight":
        return cls([Piece(lo, hi, coeff, exp)])

    def eval(self, y):
        return self(y)

    def power_integral(self, rho: float, a: float = 0.0, b: float = inf) -> float:
        """Exact ``integral_a^b v**rho``; ``inf`` when divergent."""
        if rho <= 0.0:
            raise WeightError("power_integral needs rho > 0")
        if not 0.0 <= a < b:
            raise WeightError(f"bad interval ({a}, {b})")
        return self.integral(a, b, rho=rho)

    def primitive(self, rho: float, t, a: float = 0.0):
        """Vectorised ``t -> integral_a^t v**rho`` (zero for ``t <= a``)."""
        t = np.atleast_1d(np.asarray(t, dtype=float))
        out = np.zeros_like(t)
        acc = 0.0
        for p, s, e in self.segments(a, inf):
            inside = (t > s) & (t <= e)
            if p.coeff and np.any(inside):
                g = p.exp * rho + 1.0
                cr = p.coeff**rho
                ti = t[inside]
                if s == 0.0 and g <= 0.0:
                    part = np.full_like(ti, inf)
                elif g == 0.0:
                    part = cr * np.log(ti / s)
                elif s == 0.0:
                    part = cr * ti**g / g
                else:
                    part = cr * s**g * np.expm1(g * np.log(ti / s)) / g
                out[inside] = acc + part
            elif np.any(inside):
                out[inside] = acc
            acc += mono_integral(p.coeff**rho if p.coeff else 0.0, p.exp * rho, s, e)
            if np.isinf(acc):
                out[t > e] = inf
                break
        return out

    def restricted(self, a: float, b: float) -> "Weight":
        """``v * chi_(a, b)``."""
        return Weight(Piece(s, e, p.coeff, p.exp) for p, s, e in self.segments(a, b) if p.coeff)

    def scaled(self, c: float) -> "Weight":
        return Weight(Piece(p.lo, p.hi, p.coeff * c, p.exp) for p in self.pieces if p.coeff)


def _num(x) -> float:
    if isinstance(x, str):
        if x.strip().lower() in ("inf", "+inf", "infinity"):
            return inf
        raise WeightError(f"not a number: {x!r}")
    if isinstance(x, bool) or not isinstance(x, (int, float)):
        raise WeightError(f"not a number: {x!r}")
    return float(x)
