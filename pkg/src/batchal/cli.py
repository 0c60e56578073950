"""Command line entry point.

Subcommands:
    run       execute an experiment described by a config file
    oracle    evaluate a registered oracle at one design point
    selftest  run the built-in verification checks
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from .config import ConfigError, parse_config, with_overrides
from .harness import run_experiment
from .oracles import ORACLE_NAMES, make_oracle
from .selftest import run_selftest


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="batchal",
        description="Batch-mode active learning for regression surrogates.")
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="run an experiment from a config file")
    run_p.add_argument("--config", required=True, help="path to the config file")
    run_p.add_argument("--out", default=None, help="override the output directory")
    run_p.add_argument("--seed", type=int, default=None, help="override the base seed")

    oracle_p = sub.add_parser("oracle", help="query a labeling oracle")
    oracle_sub = oracle_p.add_subparsers(dest="oracle_command", required=True)
    eval_p = oracle_sub.add_parser("eval", help="evaluate an oracle at a point")
    eval_p.add_argument("--name", required=True, choices=ORACLE_NAMES)
    eval_p.add_argument("--point", required=True,
                        help="comma-separated coordinates, e.g. 500,0.1,0.04,0.01")

    sub.add_parser("selftest", help="run built-in verification checks")
    return parser


def _cmd_run(args) -> int:
    try:
        cfg = parse_config(args.config)
        cfg = with_overrides(cfg, out_dir=args.out, base_seed=args.seed)
    except (ConfigError, OSError) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 2
    try:
        trace_path, summary_path, _ = run_experiment(cfg)
    except Exception as exc:   # noqa: BLE001 - any run failure means exit 1
        print("error: experiment failed: %s" % exc, file=sys.stderr)
        return 1
    print("wrote %s" % trace_path)
    print("wrote %s" % summary_path)
    return 0


def _cmd_oracle_eval(args) -> int:
    try:
        point = np.array([float(v) for v in args.point.split(",")])
    except ValueError:
        print("error: --point needs comma-separated numbers, got %r"
              % args.point, file=sys.stderr)
        return 2
    oracle = make_oracle(args.name)
    try:
        value = oracle.label(point.reshape(1, -1))[0]
    except ValueError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 2
    print(float(value))
    return 0


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    if args.command == "run":
        return _cmd_run(args)
    if args.command == "oracle":
        return _cmd_oracle_eval(args)
    return 0 if run_selftest() else 1


if __name__ == "__main__":
    sys.exit(main())
