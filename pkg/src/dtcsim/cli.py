"""Command-line interface.

Subcommands map onto the protocols: ``signature`` and ``thermo`` run the
plain dynamics (the latter defaults to a fine sampling grid for rate
integration), ``measure-avg`` the exact measurement-averaged evolution,
``measure-traj`` Monte-Carlo trajectories, ``sweep`` whatever the config
specifies, and ``plot`` renders files produced by any of them.

Exit codes: 0 success, 2 configuration error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .config import load_config_file, parse_value, resolve_config
from .errors import ConfigError, NumericalError
from .runner import default_jobs, run_experiment


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", type=str, default=None,
                        help="path to a key=value config file")
    parser.add_argument("--set", dest="overrides", action="append", default=[],
                        metavar="KEY=VALUE", help="override one config key (repeatable)")
    parser.add_argument("--seed", type=int, default=None, help="master seed (u64)")
    parser.add_argument("--jobs", type=int, default=None,
                        help="parallel worker count (default: DTCSIM_JOBS or 1)")
    parser.add_argument("--out", type=str, default=None, help="output directory")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dtcsim",
        description="Driven disordered spin-chain simulator with a thermal bath")
    parser.add_argument("--selftest", action="store_true",
                        help="run the built-in small-system oracle suite and exit")
    sub = parser.add_subparsers(dest="command")
    for name, help_text in (
        ("signature", "plain run recording the collective-magnetization signature"),
        ("thermo", "plain run on a fine grid for thermodynamic rates"),
        ("measure-avg", "measurement-averaged (dephasing map) run"),
        ("measure-traj", "Monte-Carlo measurement trajectories"),
        ("sweep", "run the full grid cross-product from the config"),
    ):
        p = sub.add_parser(name, help=help_text)
        _add_common(p)
    plot = sub.add_parser("plot", help="render plots from an output directory")
    plot.add_argument("run_dir", type=str, help="directory with trace/stats files")
    plot.add_argument("--out", type=str, default=None, help="plot output directory")
    return parser


_COMMAND_PROTOCOL = {
    "signature": "plain",
    "thermo": "plain",
    "measure-avg": "measured-average",
    "measure-traj": "trajectories",
}


def _resolve_from_args(args) -> tuple:
    file_values = load_config_file(args.config) if args.config else {}
    overrides = {}
    for item in args.overrides:
        if "=" not in item:
            raise ConfigError("--set", f"expected KEY=VALUE, got {item!r}")
        key, _, value = item.partition("=")
        overrides[key.strip()] = parse_value(value)
    if args.command in _COMMAND_PROTOCOL:
        overrides["run.protocol"] = _COMMAND_PROTOCOL[args.command]
    if args.command == "thermo" and "run.sample_dt" not in overrides \
            and "run.sample_dt" not in file_values:
        overrides["run.sample_dt"] = 0.01
    if args.seed is not None:
        overrides["run.seed"] = args.seed
    if args.out is not None:
        overrides["run.out"] = args.out
    config = resolve_config(file_values, overrides)
    jobs = args.jobs if args.jobs is not None else default_jobs()
    if jobs < 1:
        raise ConfigError("--jobs", "worker count must be >= 1")
    return config, jobs


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    if args.selftest:
        from .selftest import run_selftest
        return 0 if run_selftest() else 3

    if args.command is None:
        parser.print_help()
        return 0

    try:
        if args.command == "plot":
            from .plots import emit_plots
            run_dir = Path(args.run_dir)
            if not run_dir.is_dir():
                raise ConfigError("run_dir", f"{run_dir} is not a directory")
            written = emit_plots(run_dir, args.out)
            for path in written:
                print(path)
            return 0

        config, jobs = _resolve_from_args(args)
        records = run_experiment(config, jobs=jobs)
        print(f"wrote {len(records)} run record(s) to {config.out_dir}")
        return 0
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
