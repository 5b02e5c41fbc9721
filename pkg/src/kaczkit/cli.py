"""Command-line entry point.

    kaczkit run --config cfg.json [--out DIR] [--seed N] [--keep-trials]
    kaczkit list

Exit codes: 0 success, 2 configuration error, 3 numerical failure.
"""
from __future__ import annotations

import argparse
import json
import sys

from .errors import ConfigError, KaczkitError
from .runner import DEFAULTS, EXPERIMENTS, emit_artifacts, parse_config, run_experiment


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="kaczkit", description="row-projection solver experiment harness"
    )
    sub = parser.add_subparsers(dest="command", required=True)
    run_p = sub.add_parser("run", help="run one experiment from a JSON config")
    run_p.add_argument("--config", required=True, help="path to the JSON config")
    run_p.add_argument("--out", default=None, help="output directory")
    run_p.add_argument("--seed", type=int, default=None, help="override config seed")
    run_p.add_argument(
        "--keep-trials", action="store_true", help="also write per-trial traces"
    )
    sub.add_parser("list", help="list experiments with their default configs")
    return parser


def _cmd_list() -> int:
    for name in EXPERIMENTS:
        print(name)
        print(json.dumps(DEFAULTS[name], indent=2, sort_keys=True, default=str))
    return 0


def _cmd_run(args) -> int:
    try:
        with open(args.config) as fh:
            doc = json.load(fh)
    except OSError as exc:
        print(f"error: cannot read config: {exc}", file=sys.stderr)
        return 2
    except json.JSONDecodeError as exc:
        print(f"error: config is not valid JSON: {exc}", file=sys.stderr)
        return 2

    try:
        if args.seed is not None:
            doc["seed"] = args.seed
        cfg = parse_config(doc)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2

    out_dir = args.out or f"artifacts-{cfg['experiment']}"
    try:
        report = run_experiment(cfg)
        written = emit_artifacts(report, out_dir, keep_trials=args.keep_trials)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except (KaczkitError, ArithmeticError, OSError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3
    for row in report.summary:
        print(",".join(f"{k}={v}" for k, v in row.items()))
    print(f"wrote {len(written)} artifacts to {out_dir}")
    return 0


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    if args.command == "list":
        return _cmd_list()
    return _cmd_run(args)


if __name__ == "__main__":
    sys.exit(main())
