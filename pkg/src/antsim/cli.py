"""Command-line front door.

    antsim run <scenario-file> [--sweep <file>] [--out <dir>]
                               [--parallel <n>] [--seed <u64>]

Exit code 0 only when every run succeeded; 1 when any run failed; 2 for
configuration errors.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .runner import execute
from .scenario import ConfigError, SweepSpec, expand_sweep, parse_scenario, parse_sweep


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="antsim", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)
    runp = sub.add_parser("run", help="execute a scenario, optionally sweeping parameters")
    runp.add_argument("scenario", type=Path, help="scenario file")
    runp.add_argument("--sweep", type=Path, default=None, help="sweep file")
    runp.add_argument("--out", type=Path, default=Path("out"), help="output directory")
    runp.add_argument("--parallel", type=int, default=1, help="concurrent runs")
    runp.add_argument("--seed", type=int, default=None, help="override the base seed")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.parallel < 1:
        print("antsim: --parallel must be >= 1", file=sys.stderr)
        return 2
    try:
        config = parse_scenario(args.scenario.read_text())
        sweep = parse_sweep(args.sweep.read_text()) if args.sweep else SweepSpec()
        base_seed = config.seed if args.seed is None else args.seed
        runs = expand_sweep(config, sweep, base_seed=base_seed)
    except (ConfigError, OSError) as exc:
        print(f"antsim: {exc}", file=sys.stderr)
        return 2
    result = execute(config, runs, out_dir=args.out, parallelism=args.parallel)
    failed = [r for r in result.records if not r.ok]
    for rec in failed:
        print(f"antsim: run {rec.spec.run_index} failed: {rec.error}", file=sys.stderr)
    print(
        f"{len(result.records) - len(failed)}/{len(result.records)} runs ok, "
        f"results in {args.out}"
    )
    return 0 if not failed else 1


if __name__ == "__main__":
    sys.exit(main())
