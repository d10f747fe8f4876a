"""Config loading, experiment invocation, and machine-readable result files.

The config is a YAML document mirroring the Scenario fields plus run-level
keys (sweep, schedulers, output, parallelism). Unknown keys are rejected with
their full path. Results land as a CSV of sweep rows plus a JSON manifest
carrying the seeds, the exact configuration, and a hash of it, so a run can
be reproduced byte for byte.
"""
from __future__ import annotations

import argparse
import csv
import dataclasses
import hashlib
import json
import sys
from pathlib import Path

import numpy as np
import scipy
import yaml

from .channel import RadioConfig
from .engine import SWEEPABLE, SCHEDULERS, QlConfig, Scenario, SweepRow, run_experiment

PACKAGE_VERSION = "0.1.0"


class ConfigError(ValueError):
    """Malformed, unknown, or out-of-range configuration input."""


@dataclasses.dataclass
class RunSpec:
    """A parsed run request: the base scenario plus run-level options."""

    scenario: Scenario
    schedulers: list[str]
    sweep: dict | None = None
    out_dir: str = "results"
    parallel: int = 1


def _coerce(value, annotation: str, where: str):
    """Coerce YAML scalars to the field's declared type. Strings that look
    numeric are accepted because YAML 1.1 reads exponents like 1.0e6 as text."""
    try:
        if annotation == "int":
            if isinstance(value, bool):
                raise ValueError(value)
            if isinstance(value, float) and not value.is_integer():
                raise ValueError(value)
            return int(value)
        if annotation == "float":
            return float(value)
        if annotation == "str":
            if not isinstance(value, str):
                raise ValueError(value)
            return value
        if annotation == "float | list[float]":
            if isinstance(value, list):
                return [float(x) for x in value]
            return float(value)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"bad value for {where}: {value!r}") from exc
    return value


def _build(cls, data: dict, path: str):
    fields = {f.name: f for f in dataclasses.fields(cls)}
    kwargs = {}
    for key, value in data.items():
        if key not in fields:
            raise ConfigError(f"unknown key: {path}{key}")
        kwargs[key] = _coerce(value, fields[key].type, f"{path}{key}")
    try:
        return cls(**kwargs)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"bad value under {path or 'top level'}: {exc}") from exc


TOP_LEVEL_KEYS = {
    "m_ues", "uas_per_ue", "qos_classes", "total_bits", "rho_policy",
    "edge_distance_m", "scheduler", "band", "los_mode", "cell_radius_m",
    "min_distance_m", "drops", "seed", "radio", "qlearn",
    "schedulers", "sweep", "out_dir", "parallel",
}


def scenario_from_dict(data: dict, path: str = "") -> Scenario:
    """Validated Scenario from a plain dict (config file or manifest)."""
    data = dict(data)
    radio = _build(RadioConfig, data.pop("radio", {}), f"{path}radio.")
    ql_raw = dict(data.pop("qlearn", {}))
    if "rewards" in ql_raw:
        ql_raw["rewards"] = tuple(float(x) for x in ql_raw["rewards"])
    qlearn = _build(QlConfig, ql_raw, f"{path}qlearn.")
    sc = _build(Scenario, {**data, "radio": radio, "qlearn": qlearn}, path)
    try:
        sc.validate()
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    return sc


def scenario_to_dict(sc: Scenario) -> dict:
    out = dataclasses.asdict(sc)
    out["qlearn"]["rewards"] = list(out["qlearn"]["rewards"])
    return out


def parse_config(path: str | Path) -> RunSpec:
    """Load and validate a YAML config file. An empty file means defaults."""
    try:
        raw = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    try:
        data = yaml.safe_load(raw)
    except yaml.YAMLError as exc:
        raise ConfigError(f"malformed config {path}: {exc}") from exc
    if data is None:
        data = {}
    if not isinstance(data, dict):
        raise ConfigError(f"config {path} must be a mapping")

    for key in data:
        if key not in TOP_LEVEL_KEYS:
            raise ConfigError(f"unknown key: {key}")
    data = dict(data)
    schedulers = data.pop("schedulers", None)
    sweep = data.pop("sweep", None)
    out_dir = data.pop("out_dir", "results")
    parallel = int(data.pop("parallel", 1))
    if parallel < 1:
        raise ConfigError("parallel must be at least 1")

    scenario = scenario_from_dict(data)
    if schedulers is None:
        schedulers = [scenario.scheduler]
    for s in schedulers:
        if s not in SCHEDULERS:
            raise ConfigError(f"unknown scheduler {s!r} in schedulers")
    if sweep is not None:
        extra = set(sweep) - {"parameter", "values"}
        if extra:
            raise ConfigError(f"unknown key: sweep.{sorted(extra)[0]}")
        if sweep.get("parameter") not in SWEEPABLE:
            raise ConfigError(
                f"sweep.parameter must be one of {SWEEPABLE}, got {sweep.get('parameter')!r}"
            )
        if not isinstance(sweep.get("values"), list) or not sweep["values"]:
            raise ConfigError("sweep.values must be a non-empty list")
    return RunSpec(scenario=scenario, schedulers=list(schedulers),
                   sweep=sweep, out_dir=out_dir, parallel=parallel)


def _fmt(value) -> str:
    if isinstance(value, float):
        return format(value, ".9g")
    return str(value)


def csv_header(sc: Scenario) -> list[str]:
    slots = sc.qos_classes
    return (
        ["sweep_param", "sweep_value", "scheduler", "band", "m_ues", "drops",
         "mean_outage", "ci_low", "ci_high", "mean_satisfied"]
        + [f"sat_ues_{i}" for i in range(sc.uas_per_ue + 1)]
        + [f"uw_load_slot_{t}" for t in range(1, slots + 1)]
        + [f"mmw_load_slot_{t}" for t in range(1, slots + 1)]
    )


def emit_results(rows: list[SweepRow], sc: Scenario, out_dir: str | Path,
                 schedulers: list[str], sweep: dict | None) -> tuple[Path, Path]:
    """Write results.csv and manifest.json; returns both paths.

    Emission is deterministic: identical rows produce byte-identical files.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    csv_path = out / "results.csv"
    with csv_path.open("w", newline="") as fh:
        writer = csv.writer(fh, delimiter=",", lineterminator="\n")
        writer.writerow(csv_header(sc))
        for row in rows:
            writer.writerow(
                [_fmt(v) for v in (
                    row.sweep_param, row.sweep_value, row.scheduler, row.band,
                    row.m_ues, row.drops, row.mean_outage, row.ci_low,
                    row.ci_high, row.mean_satisfied,
                )]
                + [_fmt(v) for v in row.satisfied_ue_hist]
                + [_fmt(v) for v in row.uw_load]
                + [_fmt(v) for v in row.mmw_load]
            )

    scenario_dict = scenario_to_dict(sc)
    config_json = json.dumps(scenario_dict, sort_keys=True)
    manifest = {
        "scenario": scenario_dict,
        "schedulers": schedulers,
        "sweep": sweep,
        "seeds": {"base": sc.seed, "scheme": "base + drop index"},
        "config_sha256": hashlib.sha256(config_json.encode()).hexdigest(),
        "versions": {
            "dualband-sched": PACKAGE_VERSION,
            "numpy": np.__version__,
            "scipy": scipy.__version__,
        },
    }
    manifest_path = out / "manifest.json"
    manifest_path.write_text(json.dumps(manifest, sort_keys=True, indent=2) + "\n")
    return csv_path, manifest_path


def _run_command(args: argparse.Namespace) -> int:
    spec = parse_config(args.config)
    if args.drops is not None:
        spec.scenario.drops = args.drops
    if args.seed is not None:
        spec.scenario.seed = args.seed
    if args.parallel is not None:
        spec.parallel = args.parallel
    if args.scheduler is not None:
        spec.scenario.scheduler = args.scheduler
        spec.schedulers = [args.scheduler]
    if args.band is not None:
        spec.scenario.band = args.band
    if args.out is not None:
        spec.out_dir = args.out
    spec.scenario.validate()

    rows: list[SweepRow] = []
    for sched in spec.schedulers:
        sc = dataclasses.replace(spec.scenario, scheduler=sched)
        rows.extend(run_experiment(sc, spec.sweep, spec.parallel))
    csv_path, manifest_path = emit_results(
        rows, spec.scenario, spec.out_dir, spec.schedulers, spec.sweep
    )
    print(f"wrote {csv_path} and {manifest_path}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dualband-sched",
        description="Dual-band small-cell scheduling simulator",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    run = sub.add_parser("run", help="run an experiment from a config file")
    run.add_argument("--config", required=True, help="YAML config path")
    run.add_argument("--out", help="output directory (default from config)")
    run.add_argument("--drops", type=int, help="override drop count")
    run.add_argument("--seed", type=int, help="override base seed")
    run.add_argument("--parallel", type=int, help="worker processes")
    run.add_argument("--scheduler", choices=list(SCHEDULERS),
                     help="run a single scheduler")
    run.add_argument("--band", choices=["dual", "uw", "mmw"], help="band mode")
    run.set_defaults(func=_run_command)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # simulation failures exit nonzero, per contract
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
