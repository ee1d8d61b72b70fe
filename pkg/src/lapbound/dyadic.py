"""Dyadic block sums with exact geometric tails.

Block ``k`` is ``[2^(k-1), 2^k]``.  Far enough from the weight's breakpoints a
block quantity is ``C * 2^(k e)`` exactly, so sums of its ``s``-th powers over
all ``k`` below (above) the computed range are finite geometric series.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

from .weights import PiecewisePower

inf = math.inf

TAIL_RTOL = 1e-12
MAX_EXTRA_BLOCKS = 400


def natural_range(w: PiecewisePower) -> tuple[int, int]:
    """Smallest ``[k_lo, k_hi]`` outside which every block sits in one end piece."""
    bps = w.breakpoints
    if not bps:
        return 0, 0
    k_lo = math.floor(math.log2(bps[0]))
    k_hi = math.ceil(math.log2(bps[-1])) + 1
    return k_lo, max(k_hi, k_lo)


def end_exponents(w: PiecewisePower, rho: float, mu: float) -> tuple[float | None, float | None]:
    """Growth exponents ``e`` with ``block_k ~ 2^(k e)`` at ``-inf``/``+inf``.

    The block is ``2^(-k mu) (integral_{Delta_k} w^rho)^(1/rho)`` (``rho = inf``
    means the block supremum).  ``None`` marks a tail that vanishes identically.
    """
    out = []
    for piece in (w.pieces[0], w.pieces[-1]):
        if piece.coeff == 0.0:
            out.append(None)
        elif math.isinf(rho):
            out.append(piece.exp - mu)
        else:
            out.append(piece.exp + 1.0 / rho - mu)
    return out[0], out[1]


def geometric_tail(edge_value: float, e: float | None, s: float, downward: bool) -> float:
    """``sum_{j>=1} (edge_value 2^(-+ j e))^s``: sum beyond a range edge."""
    if e is None or edge_value == 0.0:
        return 0.0
    rate = e * s if downward else -e * s
    if rate <= 0.0:
        return inf
    ratio = 2.0 ** (-rate)
    return edge_value**s * ratio / (1.0 - ratio)


@dataclass
class BlockSeries:
    """Values of a dyadic block quantity over ``[k_lo, k_hi]`` with exact tails."""

    k_lo: int
    k_hi: int
    values: dict
    e_lo: float | None
    e_hi: float | None
    block: Callable[[int], float] = field(repr=False, default=None)

    def power_sum(self, s: float) -> tuple[float, float]:
        """``(partial, tail)`` for ``sum_k value_k^s``."""
        partial = math.fsum(v**s for v in self.values.values() if v > 0.0)
        tail = geometric_tail(self.values[self.k_lo], self.e_lo, s, True) + geometric_tail(
            self.values[self.k_hi], self.e_hi, s, False
        )
        return partial, tail

    def total(self, s: float) -> float:
        partial, tail = self.power_sum(s)
        return partial + tail

    def extend_for(self, s: float, rtol: float = TAIL_RTOL) -> "BlockSeries":
        """Widen the range until each tail is at most ``rtol`` of the partial sum."""
        extra = 0
        while extra < MAX_EXTRA_BLOCKS:
            partial, _ = self.power_sum(s)
            lo_tail = geometric_tail(self.values[self.k_lo], self.e_lo, s, True)
            hi_tail = geometric_tail(self.values[self.k_hi], self.e_hi, s, False)
            grow_lo = lo_tail > rtol * partial and math.isfinite(lo_tail)
            grow_hi = hi_tail > rtol * partial and math.isfinite(hi_tail)
            if not (grow_lo or grow_hi):
                break
            if grow_lo:
                self.k_lo -= 1
                self.values[self.k_lo] = self.block(self.k_lo)
            if grow_hi:
                self.k_hi += 1
                self.values[self.k_hi] = self.block(self.k_hi)
            extra += 1
        self.values = dict(sorted(self.values.items()))
        return self


def block_series(block: Callable[[int], float], k_lo: int, k_hi: int, e_lo, e_hi) -> BlockSeries:
    values = {k: block(k) for k in range(k_lo, k_hi + 1)}
    return BlockSeries(k_lo, k_hi, values, e_lo, e_hi, block)
