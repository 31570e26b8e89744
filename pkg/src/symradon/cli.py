"""Command-line driver: one subcommand per verification pipeline, CSV and JSON reports."""
from __future__ import annotations

import argparse
import csv
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path

from .calibration import Constants, calibrate
from .checks import CSV_HEADER, PIPELINE_SPACES, PIPELINES, ReportRow, RunContext, calibration_rows, run_all
from .geometry import PhantomSpec
from .numerics import QuadratureSpec

SUBCOMMANDS = (*PIPELINES, "calibrate", "all")

CONFIG_KEYS = {"quadrature", "phantom", "params", "seed"}
PHANTOM_KEYS = {"kind", "space", "center", "width", "amplitude", "support_radius"}
PARAM_TYPES = {
    "probes": int,
    "plane_probes": int,
    "h3_probes": int,
    "R": float,
    "delta": float,
    "lambda_max": float,
    "lambda_step": float,
    "boundary_samples": int,
    "product_angles": int,
    "constants": str,
}


class ConfigError(ValueError):
    pass


def _center(space: str, raw):
    if raw is None:
        return None
    if space == "H2":
        return complex(*raw) if isinstance(raw, list) else complex(raw)
    if space == "H2xH2":
        if not (isinstance(raw, list) and len(raw) == 2):
            raise ConfigError("an H2xH2 center is a pair of disk points")
        return tuple(_center("H2", c) for c in raw)
    return [float(v) for v in raw]


def _phantom(data: dict) -> PhantomSpec:
    unknown = set(data) - PHANTOM_KEYS
    if unknown:
        raise ConfigError(f"unknown phantom keys: {sorted(unknown)}")
    if "kind" not in data:
        raise ConfigError("phantom needs a kind")
    space = data.get("space", "H2")
    kw = {k: v for k, v in data.items() if k != "center"}
    return PhantomSpec(center=_center(space, data.get("center")), **kw)


def _params(data: dict) -> dict:
    out = {}
    for key, value in data.items():
        if key not in PARAM_TYPES:
            raise ConfigError(f"unknown parameter {key!r}")
        kind = PARAM_TYPES[key]
        if kind is int and not (isinstance(value, int) and not isinstance(value, bool) and value > 0):
            raise ConfigError(f"{key} must be a positive integer")
        if kind is float and not (isinstance(value, (int, float)) and value > 0):
            raise ConfigError(f"{key} must be a positive number")
        if kind is str and not isinstance(value, str):
            raise ConfigError(f"{key} must be a path")
        out[key] = kind(value)
    return out


@dataclass
class RunConfig:
    quadrature: QuadratureSpec = field(default_factory=QuadratureSpec)
    phantom: PhantomSpec | None = None
    params: dict = field(default_factory=dict)
    seed: int = 0

    @classmethod
    def from_dict(cls, data) -> "RunConfig":
        if not isinstance(data, dict):
            raise ConfigError("the config must be a JSON object")
        unknown = set(data) - CONFIG_KEYS
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        try:
            quad = QuadratureSpec.from_dict(data.get("quadrature", {}))
            ph = _phantom(data["phantom"]) if data.get("phantom") is not None else None
        except (TypeError, ValueError) as exc:
            raise ConfigError(str(exc)) from exc
        seed = data.get("seed", 0)
        if not (isinstance(seed, int) and 0 <= seed < 2**64):
            raise ConfigError("seed must be an unsigned 64-bit integer")
        return cls(quad, ph, _params(data.get("params", {})), seed)

    @classmethod
    def load(cls, path) -> "RunConfig":
        try:
            with open(path) as fh:
                data = json.load(fh)
        except OSError as exc:
            raise ConfigError(f"cannot read config: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config is not valid JSON: {exc}") from exc
        return cls.from_dict(data)


def write_report(rows: list[ReportRow], path: Path):
    with open(path, "w", newline="") as fh:
        fh.write(CSV_HEADER + "\n")
        writer = csv.writer(fh, lineterminator="\n")
        for row in rows:
            writer.writerow(row.csv_fields())


def write_summary(subcommand: str, rows: list[ReportRow], ctx: RunContext, path: Path):
    summary = {
        "subcommand": subcommand,
        "seed": ctx.seed,
        "rows": len(rows),
        "passed": sum(r.passed for r in rows),
        "failed": [r.check_id for r in rows if not r.passed],
        "negative_controls": [r.check_id for r in rows if r.expect_fail],
        "constants": None if ctx.constants is None else ctx.constants.to_dict(),
        "quadrature": ctx.quad.to_dict(),
        "runtime_ms": {r.check_id: round(r.runtime_ms, 1) for r in rows if r.runtime_ms is not None},
    }
    with open(path, "w") as fh:
        json.dump(summary, fh, indent=2)
        fh.write("\n")


def _check_phantom_fits(subcommand: str, cfg: RunConfig):
    if cfg.phantom is None or subcommand in ("all", "calibrate"):
        return
    if cfg.phantom.space not in PIPELINE_SPACES[subcommand]:
        raise ConfigError(f"{subcommand} has no phantom on {cfg.phantom.space}")
    if subcommand == "abel-identities" and cfg.phantom.center not in (None, 0, 0j):
        raise ConfigError("abel-identities needs a phantom centered at the origin")


def run(subcommand: str, cfg: RunConfig, out: Path, jobs: int = 1) -> tuple[int, list[ReportRow]]:
    """Execute one subcommand and write its reports; returns the exit code and the rows."""
    if subcommand not in SUBCOMMANDS:
        raise ConfigError(f"unknown subcommand {subcommand!r}")
    _check_phantom_fits(subcommand, cfg)
    out.mkdir(parents=True, exist_ok=True)
    constants_path = Path(cfg.params.get("constants", out / "constants.json"))
    constants = None
    if subcommand != "calibrate" and constants_path.exists():
        try:
            constants = Constants.load(constants_path)
        except (ValueError, TypeError) as exc:
            raise ConfigError(str(exc)) from exc
    ctx = RunContext(cfg.quadrature, cfg.phantom, cfg.params, cfg.seed, constants, jobs, out)

    if subcommand == "calibrate":
        ctx.constants = calibrate(cfg.quadrature)
        ctx.constants.save(constants_path)
        rows = calibration_rows(ctx.constants)
    elif subcommand == "all":
        fresh = ctx.constants is None
        rows = run_all(ctx)
        if fresh:
            ctx.constants.save(constants_path)
    else:
        try:
            rows = PIPELINES[subcommand](ctx)
        except LookupError as exc:
            raise ConfigError(str(exc)) from exc

    write_report(rows, out / f"{subcommand}.csv")
    write_summary(subcommand, rows, ctx, out / f"{subcommand}.summary.json")
    return (0 if all(r.passed for r in rows) else 1), rows


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="symradon", description="Numerical verification of integral-geometry identities.")
    p.add_argument("subcommand", choices=SUBCOMMANDS)
    p.add_argument("--config", type=Path, help="JSON run configuration")
    p.add_argument("--out", type=Path, default=Path("symradon-out"), help="report directory")
    p.add_argument("--seed", type=int, help="seed for probe placement (overrides the config)")
    p.add_argument("--jobs", type=int, default=1, help="worker threads for independent probes")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = RunConfig.load(args.config) if args.config else RunConfig()
        if args.seed is not None:
            if not 0 <= args.seed < 2**64:
                raise ConfigError("seed must be an unsigned 64-bit integer")
            cfg.seed = args.seed
        if args.jobs < 1:
            raise ConfigError("--jobs must be at least 1")
        code, rows = run(args.subcommand, cfg, args.out, args.jobs)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    failed = [r for r in rows if not r.passed]
    print(f"{args.subcommand}: {len(rows) - len(failed)}/{len(rows)} checks passed; reports in {args.out}")
    for r in failed:
        print(f"  FAILED {r.check_id}: error {r.error:.3g} > tolerance {r.tolerance:g}"
              if not r.expect_fail else f"  FAILED {r.check_id}: negative control did not fail")
    return code


if __name__ == "__main__":
    sys.exit(main())
