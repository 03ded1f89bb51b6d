#!/usr/bin/env python3
"""
shaketab command line.

    shaketab simulate --config <path>
    shaketab nrmse --ref <csv> --meas <csv> --column <name>
    shaketab bode --system <vd|va|butterworth> --omega-min <rad/s> --omega-max <rad/s> --points <n>
    shaketab batch --config-dir <dir> --jobs <n>

Exit codes: 0 success, 2 configuration error, 3 input-data error, 4 numerical abort.
"""

import argparse
import sys
from typing import List, Optional

from config.settings import settings
from core.errors import ShakeTabError, exit_code_for
from core.logger import get_logger

logger = get_logger("shaketab.cli")


def cmd_simulate(args: argparse.Namespace) -> int:
    from core.pipeline.simulation import run_simulate
    from core.schemas import load_config

    config = load_config(args.config)
    if args.output:
        config = config.with_overrides(output_path=args.output)
    record = run_simulate(config)
    print(f"wrote {len(record)} rows to {config.output_path}")
    print(record.summary.as_text())
    return 0


def cmd_nrmse(args: argparse.Namespace) -> int:
    from core.pipeline.reports import run_nrmse

    report = run_nrmse(args.ref, args.meas, args.column)
    print(f"{report.column}: NRMSE = {report.value:.12g} ({report.samples} samples)")
    return 0


def cmd_bode(args: argparse.Namespace) -> int:
    from core.pipeline.reports import BODE_COLUMNS, run_bode

    curve = run_bode(args.system, args.omega_min, args.omega_max, args.points, output=args.output)
    if args.output is None:
        print(",".join(BODE_COLUMNS))
        for row in zip(*(curve[c] for c in BODE_COLUMNS)):
            print(",".join(f"{v:.17g}" for v in row))
    if args.system == "vd":
        print("# omega = 0 excluded: the displacement model has poles at the origin", file=sys.stderr)
    return 0


def cmd_batch(args: argparse.Namespace) -> int:
    from core.pipeline.batch import run_batch

    results = run_batch(args.config_dir, jobs=args.jobs)
    for result in results:
        status = "ok" if result.ok else f"FAILED ({result.error})"
        line = f"{result.config_path.name}: {status}"
        if result.summary is not None:
            line += f" | {result.summary.as_text()}"
        print(line)
    failures = [r.exit_code for r in results if not r.ok]
    return max(failures) if failures else 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="shaketab",
        description="Adaptive shake-table control simulation",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="Run one scenario and write its CSV log")
    p.add_argument("--config", required=True, help="Scenario file (key = value)")
    p.add_argument("--output", default=None, help="Override the scenario's output_path")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("nrmse", help="Compare one column of two CSV files")
    p.add_argument("--ref", required=True, help="Reference CSV")
    p.add_argument("--meas", required=True, help="Measured CSV")
    p.add_argument("--column", required=True, help="Column name, e.g. d_table")
    p.set_defaults(func=cmd_nrmse)

    p = sub.add_parser("bode", help="Export magnitude and phase of a named system")
    p.add_argument("--system", required=True, help="vd | va | butterworth")
    p.add_argument("--omega-min", type=float, default=0.1, help="Lowest frequency (rad/s)")
    p.add_argument("--omega-max", type=float, default=1000.0, help="Highest frequency (rad/s)")
    p.add_argument("--points", type=int, default=settings.BODE_POINTS, help="Grid size")
    p.add_argument("--output", default=None, help="CSV path (stdout when omitted)")
    p.set_defaults(func=cmd_bode)

    p = sub.add_parser("batch", help="Run every scenario in a directory")
    p.add_argument("--config-dir", required=True, help="Directory of scenario files")
    p.add_argument("--jobs", type=int, default=settings.JOBS, help="Scenarios run in parallel")
    p.set_defaults(func=cmd_batch)

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ShakeTabError as e:
        logger.error(f"{type(e).__name__}: {e}")
        return exit_code_for(e)


if __name__ == "__main__":
    sys.exit(main())
