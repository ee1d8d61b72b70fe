"""Named test weights used by the CLI, the verifier and the test-suite."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .weights import Piece, Weight

inf = math.inf


@dataclass(frozen=True)
class Fixture:
    name: str
    records: tuple
    p: float = 2.0
    q: float = 2.0
    lam: float = 1.0
    note: str = ""

    @property
    def weight(self) -> Weight:
        return Weight.from_records([dict(r) for r in self.records])


def _rec(lo, hi, coeff=1.0, exp=0.0):
    return (("lo", lo), ("hi", hi), ("coeff", coeff), ("exp", exp))


FIXTURES = {
    "W1": Fixture("W1", (_rec(0.0, 1.0, 1.0, 1.0),), note="y on (0,1)"),
    "box": Fixture("box", (_rec(0.0, 1.0),), note="indicator of (0,1)"),
    "square": Fixture("square", (_rec(0.0, 1.0, 1.0, 2.0),), p=2.0, q=1.0, note="y^2 on (0,1)"),
    "step": Fixture("step", (_rec(1.0, 2.0),), p=2.0, q=0.5, note="indicator of (1,2)"),
    "root": Fixture("root", (_rec(1.0, 4.0, 2.0, -0.5),), note="2 y^(-1/2) on (1,4)"),
    "decay": Fixture("decay", (_rec(0.0, 1.0, 1.0, 1.0), _rec(1.0, inf, 1.0, -2.0)), note="y on (0,1), y^-2 after"),
    "one": Fixture("one", (_rec(0.0, inf),), note="constant 1; bounded but not compact on L^2"),
    "zero": Fixture("zero", (), note="zero weight"),
}


def get(name: str) -> Fixture:
    try:
        return FIXTURES[name]
    except KeyError:
        raise KeyError(f"unknown fixture {name!r}; known: {', '.join(sorted(FIXTURES))}") from None


def random_power_weight(rng: np.random.Generator, pieces: int | None = None, beta=(0.0, 3.0)) -> Weight:
    """Random piecewise-power weight on (0,1) with exponents drawn from ``beta``."""
    n = int(pieces if pieces is not None else rng.integers(1, 4))
    cuts = np.sort(rng.uniform(0.05, 0.95, n - 1))
    edges = [0.0, *cuts.tolist(), 1.0]
    out = []
    for lo, hi in zip(edges[:-1], edges[1:]):
        out.append(Piece(lo, hi, float(rng.uniform(0.5, 2.0)), float(rng.uniform(*beta))))
    return Weight(out)
