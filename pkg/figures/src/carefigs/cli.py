"""`figures` command: render chart files from simulation output CSVs."""

from __future__ import annotations

import argparse
import os
import sys

from .charts import ChartDataError, render_all


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="figures",
        description="Render charts from care-simulation metrics and comparison CSVs")
    parser.add_argument("--in", dest="in_dir", required=True)
    parser.add_argument("--out", dest="out_dir", required=True)
    parser.add_argument("--format", choices=("png", "svg"), default="png")
    args = parser.parse_args(argv)

    if not os.path.isdir(args.in_dir):
        print(f"error: input directory {args.in_dir} not found", file=sys.stderr)
        return 2
    try:
        written = render_all(args.in_dir, args.out_dir, args.format)
    except ChartDataError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    if not written:
        print(f"error: no chartable CSVs in {args.in_dir}", file=sys.stderr)
        return 1
    for path in written:
        print(path)
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
