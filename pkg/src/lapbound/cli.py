"""Command-line front end.

Every subcommand reads an optional YAML config (``--config``); the other flags
override config keys.  Outputs go to ``<output>/<subcommand>-<name>.{json,csv}``.
Exit codes: 2 for configuration errors, 1 for failed verification, 0 otherwise.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import yaml

from . import config as cfgmod
from . import criteria, localnorm, oracle, partition, report, schatten, verify
from .config import ConfigError

SUBCOMMANDS = ("criteria", "kbounds", "partition", "an-curve", "schatten", "asymptotics", "oracle", "verify", "all")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _weight_arg(text: str):
    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ConfigError(f"weight: {exc}") from None
    if isinstance(data, dict):
        data = [data]
    return data


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--config", help="YAML experiment config")
    common.add_argument("--fixture", help="named fixture (overrides config weight/p/q/lam)")
    common.add_argument("--weight", help='weight records, e.g. "[{lo: 0, hi: 1, coeff: 1, exp: 1}]"')
    common.add_argument("--p", type=str)
    common.add_argument("--q", type=str)
    common.add_argument("--lam", type=float)
    common.add_argument("--name", help="label used in output filenames")
    common.add_argument("--output", "-o", help="output directory")
    common.add_argument("--seed", type=int)

    ap = _Parser(prog="lapbound", description="Norm, compactness and approximation-number bounds "
                                               "for weighted Laplace-type operators.")
    sub = ap.add_subparsers(dest="command", required=True)
    sub.add_parser("criteria", parents=[common], help="two-sided norm bound and compactness verdict")
    kb = sub.add_parser("kbounds", parents=[common], help="local norm bounds on an interval")
    kb.add_argument("--interval", nargs=2, metavar=("A", "B"))
    pa = sub.add_parser("partition", parents=[common], help="epsilon-partition and a_(N+1) bound")
    pa.add_argument("--epsilon", type=float)
    ac = sub.add_parser("an-curve", parents=[common], help="a_n bounds over a decreasing epsilon grid")
    ac.add_argument("--grid", nargs="+", type=float)
    sc = sub.add_parser("schatten", parents=[common], help="dyadic profile and Schatten-type report")
    sc.add_argument("--s", nargs="+", type=float)
    sc.add_argument("--k-range", nargs=2, type=int)
    asy = sub.add_parser("asymptotics", parents=[common], help="asymptotic constant and oracle ratio table")
    asy.add_argument("--size", type=int)
    orc = sub.add_parser("oracle", parents=[common], help="discretized spectrum and norm estimate")
    orc.add_argument("--size", type=int)
    ve = sub.add_parser("verify", parents=[common], help="run the invariant suite")
    ve.add_argument("--samples", type=int)
    ve.add_argument("--size", type=int)
    al = sub.add_parser("all", parents=[common], help="every applicable subcommand")
    al.add_argument("--samples", type=int)
    al.add_argument("--size", type=int)
    return ap


def _num_or_inf(x):
    if x is None:
        return None
    try:
        return float(x)
    except ValueError:
        raise ConfigError(f"not a number: {x!r}") from None


def resolve_config(args) -> cfgmod.ExperimentConfig:
    cfg = cfgmod.load(args.config) if args.config else cfgmod.from_fixture("W1")
    if args.fixture:
        base = cfgmod.from_fixture(args.fixture)
        cfg = cfgmod.apply_overrides(cfg, {k: getattr(base, k) for k in ("name", "weight", "p", "q", "lam")})
    over = {
        "weight": _weight_arg(args.weight) if args.weight else None,
        "p": _num_or_inf(args.p),
        "q": _num_or_inf(args.q),
        "lam": args.lam,
        "name": args.name or ("custom" if args.weight else None),
        "output": args.output,
        "seed": args.seed,
    }
    extra = {
        "interval": [_num_or_inf(x) for x in args.interval] if getattr(args, "interval", None) else None,
        "epsilon": [args.epsilon] if getattr(args, "epsilon", None) is not None else getattr(args, "grid", None),
        "s": getattr(args, "s", None),
        "k_range": getattr(args, "k_range", None),
        "oracle_sizes": [args.size] if getattr(args, "size", None) else None,
        "samples": getattr(args, "samples", None),
    }
    over.update(extra)
    return cfgmod.apply_overrides(cfg, over)


# -- subcommands -------------------------------------------------------------

def _params_weight(cfg):
    return cfg.params(), cfg.weight_obj()


def _header(cfg) -> dict:
    return {"name": cfg.name, "p": cfg.p, "q": cfg.q, "lam": cfg.lam, "weight": cfg.weight_obj().to_records()}


def cmd_criteria(cfg) -> tuple[dict, list | None]:
    params, w = _params_weight(cfg)
    rep = criteria.norm_criterion(params, w)
    out = _header(cfg)
    out["report"] = rep.to_dict()
    out["compactness_test"] = criteria.compactness_test(params, w)
    out["hilbert_schmidt"] = criteria.hilbert_schmidt_exact(params.lam, w)
    return out, None


def cmd_kbounds(cfg) -> tuple[dict, list | None]:
    params, w = _params_weight(cfg)
    out = _header(cfg)
    out["kbounds"] = localnorm.K_report(tuple(cfg.interval), params, w)
    return out, None


def cmd_partition(cfg) -> tuple[dict, list | None]:
    params, w = _params_weight(cfg)
    part = partition.split(cfg.epsilon[0], params, w)
    out = _header(cfg)
    out["partition"] = part.to_dict()
    out["an_upper"] = partition.an_upper(part, params)
    rows = [{"n": i, "a": a, "b": b, "u": u} for i, ((a, b), u) in enumerate(zip(part.intervals, part.u))]
    return out, rows


def cmd_an_curve(cfg) -> tuple[dict, list | None]:
    params, w = _params_weight(cfg)
    rows = partition.an_curve(cfg.epsilon, params, w)
    out = _header(cfg)
    out["rows"] = rows
    return out, rows


def cmd_schatten(cfg) -> tuple[dict, list | None]:
    params, w = _params_weight(cfg)
    barred = params.p == 1.0
    kr = cfg.k_range or (None, None)
    prof = schatten.sigma_profile(params, w, kr[0], kr[1], barred=barred)
    out = _header(cfg)
    out["profile"] = prof.to_dict()
    reports = []
    for s in cfg.s:
        item = {"s": s}
        try:
            item["report"] = schatten.schatten_upper_report(params, w, s)
        except schatten.SchattenError as exc:
            item["report_error"] = str(exc)
        item["lambda_J"] = schatten.lambda_J_equivalence_check(params, w, s, cfg.k_range)
        reports.append(item)
    out["reports"] = reports
    taus = criteria.tau_series(params.lam, w, prof.k_lo, prof.k_hi).values
    rows = [{"k": k, "sigma_k": prof.sigma.get(k, 0.0), "tau_k": taus.get(k, 0.0)} for k in range(prof.k_lo, prof.k_hi + 1)]
    return out, rows


def cmd_asymptotics(cfg) -> tuple[dict, list | None]:
    params, w = _params_weight(cfg)
    const = schatten.asymptotic_constant(params, w)
    out = _header(cfg)
    out["constant"] = const
    rows = None
    if params.p == 2.0 and params.q == 2.0:
        size = cfg.oracle_sizes[-1]
        sv = oracle.singular_values(oracle.discretize(params, w, size), 100)
        rows = schatten.asymptotic_ratio_table(sv, params.q, const["value"], 100)
        out["oracle_size"] = size
        out["max_scaled"] = max((r["scaled"] for r in rows), default=0.0)
        out["envelope_holds"] = all(r["scaled"] <= 10.0 * const["value"] for r in rows)
    return out, rows


def cmd_oracle(cfg) -> tuple[dict, list | None]:
    params, w = _params_weight(cfg)
    out = _header(cfg)
    runs, rows = [], []
    for size in cfg.oracle_sizes:
        op = oracle.discretize(params, w, size)
        sv = oracle.singular_values(op)
        item = {"size": size, "window": op.window, "truncation_error": op.truncation_error,
                "singular_values": sv[:50].tolist(), "sum_sq": float((sv**2).sum())}
        if not (params.p == 2.0 and params.q == 2.0):
            item["norm_estimate"] = oracle.operator_norm_pq(op, params.p, params.q, seed=cfg.seed).to_dict()
        runs.append(item)
        rows.extend({"size": size, "n": i + 1, "sigma": float(s)} for i, s in enumerate(sv))
    out["runs"] = runs
    return out, rows


def cmd_verify(cfg) -> tuple[dict, list | None]:
    res = verify.run(seed=cfg.seed, samples=cfg.samples, size=max(cfg.oracle_sizes[-1], 512))
    rows = [{"check": c["name"], "passed": c["passed"]} for c in res["checks"]]
    return res, rows


COMMANDS = {
    "criteria": cmd_criteria,
    "kbounds": cmd_kbounds,
    "partition": cmd_partition,
    "an-curve": cmd_an_curve,
    "schatten": cmd_schatten,
    "asymptotics": cmd_asymptotics,
    "oracle": cmd_oracle,
    "verify": cmd_verify,
}


def _write(cfg, command: str, payload: dict, rows) -> list[Path]:
    base = Path(cfg.output) / f"{command}-{cfg.name}"
    paths = [report.write_json(base.with_suffix(".json"), payload)]
    if rows:
        paths.append(report.write_csv(base.with_suffix(".csv"), rows))
    return paths


def run(command: str, cfg) -> int:
    """Run one subcommand; returns the exit status."""
    if command == "all":
        status = 0
        for name in COMMANDS:
            try:
                payload, rows = COMMANDS[name](cfg)
            except (ValueError, ArithmeticError) as exc:
                payload, rows = {"skipped": str(exc)}, None
            _write(cfg, name, payload, rows)
            if name == "verify" and not payload.get("passed", False):
                status = 1
        return status
    payload, rows = COMMANDS[command](cfg)
    for path in _write(cfg, command, payload, rows):
        print(path)
    if command == "verify":
        for c in payload["checks"]:
            print(f"{'PASS' if c['passed'] else 'FAIL'} {c['name']}")
        return 0 if payload["passed"] else 1
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        cfg = resolve_config(args)
    except (UsageError, ConfigError) as exc:
        print(f"lapbound: error: {exc}", file=sys.stderr)
        return 2
    try:
        return run(args.command, cfg)
    except (ValueError, ArithmeticError) as exc:
        print(f"lapbound: {args.command} failed: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
