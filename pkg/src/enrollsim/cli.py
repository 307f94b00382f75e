"""Command-line surface.

Subcommands:
  run          one replication, writes ticks.csv
  mc           Monte Carlo experiment, writes ticks.csv and summary.csv
  scenario     policy scenario (baseline | 1 | 2 | 3), writes summary.csv
  sweep        one-parameter sweep, writes sensitivity.csv
  sensitivity  full one-at-a-time sweep battery, writes sensitivity.csv

Exit codes: 0 success, 1 runtime failure, 2 configuration/usage error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .config import ConfigError, load_config, save_config
from .engine import run as engine_run
from .experiments import (
    DEFAULT_SWEEPS,
    SCENARIOS,
    BASELINE,
    SweepSpec,
    monte_carlo,
    oat_sensitivity,
)
from .params import ParamsError, SimulationParams
from .reporting import (
    summary_text,
    write_sensitivity_csv,
    write_summary_csv,
    write_ticks_csv,
)

EXIT_OK = 0
EXIT_RUNTIME = 1
EXIT_CONFIG = 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="enrollsim",
        description="Agent-based simulator of tertiary-education enrollment decisions.",
    )
    parser.add_argument("--config", type=Path, default=None, help="INI config file")
    parser.add_argument("--out", type=Path, default=Path("out"), help="output directory")
    parser.add_argument("--seed", type=int, default=None, help="base random seed")
    parser.add_argument("--ticks", type=int, default=None, help="ticks per replication")
    parser.add_argument("--burn-in", type=int, default=None, help="ticks to drop from aggregates")
    parser.add_argument("--workers", type=int, default=1, help="parallel replication workers")
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("run", help="single replication")
    mc = sub.add_parser("mc", help="Monte Carlo experiment")
    mc.add_argument("--reps", type=int, default=None, help="number of replications")
    scen = sub.add_parser("scenario", help="policy scenario")
    scen.add_argument("which", choices=["baseline", "1", "2", "3"])
    scen.add_argument("--reps", type=int, default=None)
    sweep = sub.add_parser("sweep", help="sweep one parameter")
    sweep.add_argument("--param", required=True, help="parameter name (e.g. kappa)")
    sweep.add_argument("--values", required=True, help="comma-separated values")
    sweep.add_argument("--reps", type=int, default=None)
    sens = sub.add_parser("sensitivity", help="full OAT sweep battery")
    sens.add_argument("--reps", type=int, default=None)
    return parser


def _resolve_params(args) -> SimulationParams:
    params = load_config(args.config) if args.config else SimulationParams()
    if args.seed is not None:
        params.set("experiments.base_seed", args.seed)
    if args.ticks is not None:
        params.set("engine.ticks", args.ticks)
    if args.burn_in is not None:
        params.set("experiments.burn_in", args.burn_in)
    if getattr(args, "reps", None) is not None:
        params.set("experiments.n_reps", args.reps)
    params.validate()
    return params


def _prepare_out(args, params: SimulationParams) -> Path:
    out: Path = args.out
    try:
        out.mkdir(parents=True, exist_ok=True)
        save_config(params, out / "resolved.ini")
    except OSError as exc:
        raise ConfigError(f"cannot write to output directory {out}: {exc}") from exc
    return out


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        params = _resolve_params(args)
        out = _prepare_out(args, params)
    except (ConfigError, ParamsError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    try:
        exp = params.experiments
        if args.command == "run":
            reports = engine_run(params, seed=exp.base_seed)
            write_ticks_csv(out / "ticks.csv", [reports])
            done = sum(r.n_completers for r in reports)
            total = sum(r.n_deciders for r in reports)
            print(f"1 replication, {len(reports)} ticks -> {out / 'ticks.csv'}")
            print(f"completers/deciders: {done}/{total}")
        elif args.command == "mc":
            summary = monte_carlo(params, BASELINE, workers=args.workers, keep_reports=True)
            write_ticks_csv(out / "ticks.csv", summary.reports)
            write_summary_csv(out / "summary.csv", [summary])
            print(summary_text(summary))
        elif args.command == "scenario":
            scenario = SCENARIOS[args.which]
            summary = monte_carlo(params, scenario, workers=args.workers, keep_reports=True)
            write_ticks_csv(out / "ticks.csv", summary.reports)
            write_summary_csv(out / "summary.csv", [summary])
            print(summary_text(summary))
        elif args.command == "sweep":
            try:
                values = tuple(float(v) for v in args.values.split(",") if v.strip())
            except ValueError as exc:
                print(f"error: bad --values: {exc}", file=sys.stderr)
                return EXIT_CONFIG
            if not values:
                print("error: --values is empty", file=sys.stderr)
                return EXIT_CONFIG
            try:
                spec = SweepSpec(args.param, values)
                spec.path
            except ValueError as exc:
                print(f"error: {exc}", file=sys.stderr)
                return EXIT_CONFIG
            cells = oat_sensitivity(params, (spec,), workers=args.workers)
            write_sensitivity_csv(out / "sensitivity.csv", cells)
            for cell in cells:
                stat = cell.summary.pooled["completion_rate"]
                print(
                    f"{cell.parameter}={cell.value:g}: completion"
                    f" {stat.mean * 100:.2f}% (sd {stat.sd * 100:.2f})"
                )
        elif args.command == "sensitivity":
            cells = oat_sensitivity(params, DEFAULT_SWEEPS, workers=args.workers)
            write_sensitivity_csv(out / "sensitivity.csv", cells)
            print(f"{len(cells)} sweep cells -> {out / 'sensitivity.csv'}")
    except (ConfigError, ParamsError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except Exception as exc:  # runtime failure, distinct exit code
        print(f"runtime failure: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
