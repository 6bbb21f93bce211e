"""Command-line front end.

Subcommands:
  simulate   run one scenario and print its summary
  constants  print design constants and the assumption report
  compare    run several modes on shared data and print the table

Failures exit nonzero after printing a single machine-readable JSON
line on stderr.
"""

from __future__ import annotations

import argparse
import json
import sys

import yaml

from .errors import HypetcError
from .experiments import (
    MODES,
    compare_modes,
    constants_report,
    default_config_yaml,
    load_config,
    run_scenario,
)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hypetc",
        description=(
            "Event-based boundary control of 2x2 hyperbolic systems: "
            "simulation runs, design constants, and mode comparisons."
        ),
    )
    parser.add_argument(
        "--print-defaults",
        action="store_true",
        help="print the full default config as YAML and exit",
    )
    sub = parser.add_subparsers(dest="command")

    sim = sub.add_parser("simulate", help="run one scenario")
    sim.add_argument("--config", required=True, help="YAML config file")
    sim.add_argument("--mode", choices=MODES, help="override the config mode")
    sim.add_argument("--out", help="override the output root directory")
    sim.add_argument("--stride", type=int, help="override the storage stride")

    con = sub.add_parser("constants", help="print design constants")
    con.add_argument("--config", required=True, help="YAML config file")

    cmp_ = sub.add_parser("compare", help="run and tabulate several modes")
    cmp_.add_argument("--config", required=True, help="YAML config file")
    cmp_.add_argument(
        "--modes",
        default="cetc,petc,stc",
        help="comma-separated mode list (default: cetc,petc,stc)",
    )
    cmp_.add_argument("--out", help="override the output root directory")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.print_defaults:
        sys.stdout.write(default_config_yaml())
        return 0
    if args.command is None:
        parser.print_usage(sys.stderr)
        return 2

    try:
        if args.command == "simulate":
            config = load_config(
                args.config, mode=args.mode, out_dir=args.out, stride=args.stride
            )
            summary = run_scenario(config)
            print(json.dumps(summary.to_dict(), indent=2, sort_keys=True))
        elif args.command == "constants":
            config = load_config(args.config)
            print(json.dumps(constants_report(config), indent=2, sort_keys=True))
        elif args.command == "compare":
            modes = [m.strip() for m in args.modes.split(",") if m.strip()]
            if not modes:
                raise ValueError("--modes must list at least one mode")
            for m in modes:
                if m not in MODES:
                    raise ValueError(f"unknown mode {m!r}")
            configs = [
                load_config(args.config, mode=m, out_dir=args.out) for m in modes
            ]
            rows = compare_modes(configs)
            print(json.dumps(rows, indent=2))
    except (HypetcError, ValueError, OSError, yaml.YAMLError) as exc:
        line = json.dumps({"error": type(exc).__name__, "message": str(exc)})
        print(line, file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
