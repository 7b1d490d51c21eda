"""Command-line entry points: run a configured batch, regenerate a report,
import human trial logs, or validate a config file."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import harness


def _cmd_validate(args) -> int:
    config, errors = harness.load_config(args.config)
    if errors:
        for err in errors:
            print(f"invalid: {err}", file=sys.stderr)
        return 1
    print(f"ok: {args.config} (preset={config.preset}, hash={config.config_hash()})")
    return 0


def _cmd_run(args) -> int:
    config, errors = harness.load_config(args.config)
    if errors:
        for err in errors:
            print(f"invalid: {err}", file=sys.stderr)
        return 1
    if args.seed is not None:
        from dataclasses import replace
        config = replace(config, master_seed=args.seed)
    out_dir = harness.default_out_dir(args.out)
    result = harness.run_batch(config, out_dir, parallel=args.parallel)
    for path in result.files:
        print(path)
    for note in result.notes:
        print(f"note: {note}")
    return 0


def _cmd_report(args) -> int:
    in_dir = Path(args.in_dir)
    logs_path = in_dir / "trial_logs.csv"
    if not logs_path.exists():
        print(f"missing {logs_path}", file=sys.stderr)
        return 1
    try:
        sessions = harness.read_trial_logs_csv(logs_path)
    except harness.TrialLogImportError as exc:
        print(f"invalid trial logs: {exc}", file=sys.stderr)
        return 1
    files, notes = harness.generate_report(sessions, in_dir)
    for path in files:
        print(path)
    for note in notes:
        print(f"note: {note}")
    return 0


def _cmd_import(args) -> int:
    try:
        sessions = harness.import_human_logs(args.logs)
    except harness.TrialLogImportError as exc:
        print(f"import rejected: {exc}", file=sys.stderr)
        return 1
    out_dir = harness.default_out_dir(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    harness.write_trial_logs_csv(out_dir / "trial_logs.csv", sessions)
    harness.write_trial_summary_csv(out_dir / "trial_summary.csv", sessions)
    files, notes = harness.generate_report(sessions, out_dir)
    print(out_dir / "trial_logs.csv")
    print(out_dir / "trial_summary.csv")
    for path in files:
        print(path)
    for note in notes:
        print(f"note: {note}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="portalbench",
        description="Simulate and analyze remote 3D selection/manipulation studies.")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run a configured batch of sessions")
    run.add_argument("--config", required=True)
    run.add_argument("--out", default=None,
                     help=f"output directory (default ${harness.OUTPUT_DIR_ENV} "
                          "or ./portalbench_out)")
    run.add_argument("--seed", type=int, default=None, help="override the master seed")
    run.add_argument("--parallel", type=int, default=1, help="participant worker count")
    run.set_defaults(func=_cmd_run)

    report = sub.add_parser("report", help="regenerate reports from trial logs")
    report.add_argument("--in", dest="in_dir", required=True)
    report.set_defaults(func=_cmd_report)

    imp = sub.add_parser("import", help="import a human/browser trial-log CSV")
    imp.add_argument("--logs", required=True)
    imp.add_argument("--out", default=None)
    imp.set_defaults(func=_cmd_import)

    val = sub.add_parser("validate", help="validate a config file")
    val.add_argument("--config", required=True)
    val.set_defaults(func=_cmd_validate)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
