"""Command-line front end for the sweep harness.

Exit codes: 0 success, 1 configuration error, 2 runtime/numeric error.
"""
from __future__ import annotations

import argparse
import sys
from dataclasses import replace

from .harness import (
    load_config,
    oracle_check,
    run_single,
    sweep_elements,
    sweep_snr,
    sweep_subcarriers,
    write_results,
)
from .validation import ConfigurationError

_SWEEP_COMMANDS = {
    "sweep-subcarriers": sweep_subcarriers,
    "sweep-elements": sweep_elements,
    "sweep-snr": sweep_snr,
}


class _Parser(argparse.ArgumentParser):
    # argparse exits with status 2 on usage errors; remap them to config errors
    def error(self, message):
        raise ConfigurationError(message)


def _add_common_flags(parser):
    parser.add_argument("--config", metavar="PATH", help="JSON config file")
    parser.add_argument("--seed", type=int, metavar="U64", help="master seed override")
    parser.add_argument("--trials", type=int, metavar="N", help="trial count override")
    parser.add_argument("--out", metavar="PATH", help="CSV output path (stdout if omitted)")
    parser.add_argument(
        "--methods",
        metavar="LIST",
        help="comma-separated subset of: sdr,unconfigured",
    )
    parser.add_argument("--jobs", type=int, default=1, metavar="N", help="parallel workers")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="rislink", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (
        ("sweep-subcarriers", "rate vs number of subcarriers"),
        ("sweep-elements", "rate vs number of reflective elements"),
        ("sweep-snr", "rate vs reference direct-link SNR"),
        ("single", "all trials at the configured dimensions"),
    ):
        cmd = sub.add_parser(name, help=help_text)
        _add_common_flags(cmd)
    oracle = sub.add_parser("oracle-check", help="pipeline vs exhaustive search on tiny channels")
    oracle.add_argument("--seed", type=int, default=0, metavar="U64")
    oracle.add_argument("--trials", type=int, default=100, metavar="N", help="instance count")
    return parser


def _resolve_config(args):
    config = load_config(args.config)
    if args.seed is not None:
        config = replace(config, master_seed=args.seed)
    if args.trials is not None:
        config = replace(config, trials=args.trials)
    if args.methods is not None:
        methods = tuple(m.strip() for m in args.methods.split(",") if m.strip())
        config = replace(config, methods=methods)
    return config


def _run_oracle(args) -> int:
    records = oracle_check(num_instances=args.trials, master_seed=args.seed)
    failures = [r for r in records if not (r["extraction_ok"] and r["relaxation_ok"])]
    for record in failures:
        print(
            f"FAIL instance {record['instance']} (N={record['n_elements']}, "
            f"K={record['num_subcarriers']}): pipeline {record['pipeline_objective']:.6g}, "
            f"relaxation {record['relaxation_objective']:.6g}, "
            f"brute force {record['brute_force_objective']:.6g}"
        )
    print(f"oracle-check: {len(records) - len(failures)}/{len(records)} instances passed")
    return 0 if not failures else 2


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command == "oracle-check":
            return _run_oracle(args)
        config = _resolve_config(args)
        if args.command == "single":
            result = run_single(config, jobs=args.jobs)
        else:
            result = _SWEEP_COMMANDS[args.command](config, jobs=args.jobs)
        if args.out:
            write_results(result, args.out, config)
            print(f"wrote {args.out} and {args.out}.config.json")
        else:
            sys.stdout.write(result.to_csv())
        return 0
    except ConfigurationError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:  # noqa: BLE001 - CLI boundary
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
