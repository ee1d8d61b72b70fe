"""Experiment configuration: a YAML mapping with a fixed key set."""

from __future__ import annotations

import math
from dataclasses import dataclass, field, fields, replace
from pathlib import Path

import yaml

from . import fixtures
from .kernel import ParamError, SpaceParams, derived_params
from .weights import Weight, WeightError


class ConfigError(ValueError):
    pass


def _num(x, key: str) -> float:
    if isinstance(x, str) and x.strip().lower() in ("inf", "+inf", "infinity"):
        return math.inf
    if isinstance(x, bool) or not isinstance(x, (int, float)):
        raise ConfigError(f"{key}: expected a number, got {x!r}")
    return float(x)


def _num_list(x, key: str) -> list[float]:
    if isinstance(x, (int, float, str)) and not isinstance(x, bool):
        x = [x]
    if not isinstance(x, (list, tuple)):
        raise ConfigError(f"{key}: expected a list of numbers")
    return [_num(v, key) for v in x]


@dataclass
class ExperimentConfig:
    name: str = "W1"
    weight: list = field(default_factory=list)
    p: float = 2.0
    q: float = 2.0
    lam: float = 1.0
    s: list = field(default_factory=lambda: [2.0])
    epsilon: list = field(default_factory=lambda: [0.4, 0.2, 0.1])
    interval: list = field(default_factory=lambda: [0.0, 1.0])
    k_range: list | None = None
    oracle_sizes: list = field(default_factory=lambda: [256])
    samples: int = 1000
    output: str = "out"
    seed: int = 0

    def params(self) -> SpaceParams:
        try:
            return derived_params(self.p, self.q, self.lam)
        except ParamError as exc:
            raise ConfigError(str(exc)) from None

    def weight_obj(self) -> Weight:
        try:
            return Weight.from_records(self.weight)
        except (WeightError, TypeError) as exc:
            raise ConfigError(f"weight: {exc}") from None

    def to_dict(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self)}


KEYS = {f.name for f in fields(ExperimentConfig)} | {"fixture"}


def from_fixture(name: str, **over) -> ExperimentConfig:
    try:
        fx = fixtures.get(name)
    except KeyError as exc:
        raise ConfigError(str(exc.args[0])) from None
    cfg = ExperimentConfig(name=fx.name, weight=[dict(r) for r in fx.records], p=fx.p, q=fx.q, lam=fx.lam)
    return replace(cfg, **over) if over else cfg


def from_mapping(data: dict) -> ExperimentConfig:
    if not isinstance(data, dict):
        raise ConfigError("config must be a mapping")
    unknown = set(data) - KEYS
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    data = dict(data)
    if "fixture" in data:
        cfg = from_fixture(str(data.pop("fixture")))
    else:
        cfg = ExperimentConfig(name=str(data.get("name", "custom")))
    return apply_overrides(cfg, data)


def apply_overrides(cfg: ExperimentConfig, over: dict) -> ExperimentConfig:
    kw = {}
    for key, val in over.items():
        if val is None:
            continue
        if key not in KEYS or key == "fixture":
            raise ConfigError(f"unknown config key: {key}")
        if key in ("p", "q", "lam"):
            kw[key] = _num(val, key)
        elif key in ("s", "epsilon", "interval"):
            kw[key] = _num_list(val, key)
        elif key == "k_range":
            vals = _num_list(val, key)
            if len(vals) != 2 or vals[0] > vals[1] or any(v != int(v) for v in vals):
                raise ConfigError("k_range: expected two integers lo <= hi")
            kw[key] = [int(v) for v in vals]
        elif key == "oracle_sizes":
            kw[key] = [int(v) for v in _num_list(val, key)]
        elif key in ("samples", "seed"):
            if isinstance(val, bool) or not isinstance(val, int):
                raise ConfigError(f"{key}: expected an integer")
            kw[key] = val
        elif key == "weight":
            if not isinstance(val, list):
                raise ConfigError("weight: expected a list of {lo, hi, coeff, exp} records")
            kw[key] = val
        else:
            kw[key] = str(val)
    cfg = replace(cfg, **kw)
    validate(cfg)
    return cfg


def validate(cfg: ExperimentConfig):
    cfg.params()
    cfg.weight_obj()
    if len(cfg.interval) != 2 or not 0.0 <= cfg.interval[0] < cfg.interval[1]:
        raise ConfigError("interval: expected 0 <= a < b")
    if any(e <= 0.0 for e in cfg.epsilon):
        raise ConfigError("epsilon: values must be positive")
    if any(s <= 0.0 for s in cfg.s):
        raise ConfigError("s: values must be positive")
    if any(n < 8 for n in cfg.oracle_sizes):
        raise ConfigError("oracle_sizes: need at least 8 nodes")
    if cfg.samples < 1:
        raise ConfigError("samples: need at least one")


def load(path) -> ExperimentConfig:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc}") from None
    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ConfigError(f"invalid YAML: {exc}") from None
    return from_mapping(data or {})
