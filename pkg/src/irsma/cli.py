"""Command line entry point.

    irsma sweep    --case 1 --out results/        # rate sweep -> CSV
    irsma validate --case 1 --trials 200          # theory check, exit != 0 on violation
    irsma solve-one --case 2 --trial 3            # one realization, all schemes/methods

Exit codes: 0 success, 2 usage, 3 bad configuration, 4 runtime/solver
failure, 5 proposition violation.
"""

import argparse
import json
import os
import sys
from dataclasses import dataclass, replace
from importlib import resources

from . import experiments
from .config import ConfigError, ParsedConfig, load_config, parse_config, parse_methods
from .experiments import (
    NO_IRS,
    SCHEMES,
    SweepSpec,
    run_sweep,
    run_trial,
    validate_propositions,
    write_sweep_csv,
)
from .solvers import Method
from .units import watts_to_dbm

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_CONFIG = 3
EXIT_RUNTIME = 4
EXIT_VIOLATION = 5


@dataclass(frozen=True)
class RunManifest:
    """One resolved CLI invocation: subcommand plus effective configuration."""

    command: str
    config: ParsedConfig
    out_dir: str = "."
    trial_index: int = 0


def _preset_text(case: int) -> str:
    return resources.files("irsma.presets").joinpath(f"case{case}.toml").read_text()


def build_manifest(args: argparse.Namespace) -> RunManifest:
    if args.config is not None and args.case is not None:
        raise ConfigError("give either --config or --case, not both")
    if args.config is not None:
        parsed = load_config(args.config)
    else:
        parsed = parse_config(_preset_text(args.case if args.case is not None else 1))

    scenario = parsed.scenario
    try:
        if args.seed is not None:
            scenario = replace(scenario, seed=args.seed)
        if args.trials is not None:
            scenario = replace(scenario, trials=args.trials)
    except ValueError as exc:
        raise ConfigError(f"override: {exc}") from None
    methods = parse_methods(args.methods) if args.methods else parsed.methods
    sweep = parsed.sweep
    if getattr(args, "sweep", None):
        grid = sweep.grid
        if args.sweep == "split-rate":
            # a common-rate grid may exceed the fixed sum; keep the feasible part
            grid = tuple(v for v in grid if 0.0 <= v <= sweep.sum_rate)
        try:
            sweep = SweepSpec(variable=args.sweep, grid=grid, sum_rate=sweep.sum_rate)
        except ValueError as exc:
            raise ConfigError(f"sweep override: {exc}") from None
    return RunManifest(
        command=args.command,
        config=ParsedConfig(scenario=scenario, sweep=sweep, methods=methods),
        out_dir=getattr(args, "out", ".") or ".",
        trial_index=getattr(args, "trial", 0) or 0,
    )


def run_manifest(manifest: RunManifest) -> int:
    scenario = manifest.config.scenario
    methods = manifest.config.methods
    if manifest.command == "sweep":
        rows = run_sweep(scenario, manifest.config.sweep, methods)
        os.makedirs(manifest.out_dir, exist_ok=True)
        out_path = os.path.join(manifest.out_dir, "sweep.csv")
        write_sweep_csv(rows, out_path)
        print(f"wrote {len(rows)} rows to {out_path}")
        return EXIT_OK

    if manifest.command == "validate":
        if Method.BRUTE_FORCE not in methods:
            raise ConfigError("validate requires the brute method")
        records = [
            run_trial(scenario, t, (Method.BRUTE_FORCE,))
            for t in range(scenario.trials)
        ]
        report = validate_propositions(records)
        os.makedirs(manifest.out_dir, exist_ok=True)
        text = report.render() + "\n"
        experiments._atomic_write(os.path.join(manifest.out_dir, "validation.txt"), text)
        experiments._atomic_write(
            os.path.join(manifest.out_dir, "validation.json"),
            json.dumps(report.to_dict(), indent=2, sort_keys=True) + "\n",
        )
        print(text, end="")
        return EXIT_OK if report.passed else EXIT_VIOLATION

    if manifest.command == "solve-one":
        record = run_trial(scenario, manifest.trial_index, methods)
        print(
            f"trial {manifest.trial_index} "
            f"(seed {scenario.seed}, rates {scenario.rates.gamma1:g}/"
            f"{scenario.rates.gamma2:g} bps/Hz)"
        )
        header = f"{'scheme':<6} {'method':<8} {'power':>12} {'order':<12} {'evals':>8}"
        print(header)
        for scheme in SCHEMES:
            for method in (*methods, NO_IRS):
                key = method if method == NO_IRS else method
                power = record.power(key, scheme)
                order = record.order(key) if scheme == "noma" else None
                name = method if isinstance(method, str) else method.value
                evals = (
                    "-"
                    if method == NO_IRS
                    else str(record.result(method, scheme).evaluations)
                )
                print(
                    f"{scheme:<6} {name:<8} {watts_to_dbm(power):>8.3f} dBm "
                    f"{(order.value if order else '-'):<12} {evals:>8}"
                )
        return EXIT_OK

    raise ConfigError(f"unknown subcommand {manifest.command!r}")


def _add_common(parser: argparse.ArgumentParser, with_out: bool = True):
    parser.add_argument("--config", metavar="PATH", help="TOML scenario file")
    parser.add_argument(
        "--case", type=int, choices=(1, 2), help="built-in deployment preset"
    )
    parser.add_argument("--seed", type=int, help="override the RNG seed")
    parser.add_argument("--trials", type=int, help="override the trial count")
    parser.add_argument(
        "--methods", metavar="LIST",
        help="comma-separated subset of brute,la-ao,rps-ao",
    )
    if with_out:
        parser.add_argument("--out", metavar="DIR", default=".", help="output directory")


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="irsma",
        description="Transmit-power comparison of NOMA/FDMA/TDMA with a "
        "discrete-phase IRS",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_sweep = sub.add_parser("sweep", help="run a rate sweep and write CSV")
    _add_common(p_sweep)
    p_sweep.add_argument(
        "--sweep", choices=("common-rate", "split-rate"), help="sweep variable"
    )

    p_val = sub.add_parser("validate", help="check the power-order propositions")
    _add_common(p_val)

    p_one = sub.add_parser("solve-one", help="solve a single realization")
    _add_common(p_one, with_out=False)
    p_one.add_argument("--trial", type=int, default=0, help="trial index to solve")
    return parser


def main(argv=None) -> int:
    args = make_parser().parse_args(argv)
    try:
        manifest = build_manifest(args)
        return run_manifest(manifest)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except Exception as exc:  # solver/runtime failures get their own code
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
