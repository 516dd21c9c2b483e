"""netauction-plots: turn a sweep CSV into the paper-style figure files."""

from __future__ import annotations

import argparse
import sys

from .render import FIGURES, CsvContractError, render


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="netauction-plots")
    sub = parser.add_subparsers(dest="command", required=True)
    cmd = sub.add_parser("render", help="render a sweep CSV to PNG and SVG")
    cmd.add_argument("csv")
    cmd.add_argument("out_dir")
    cmd.add_argument("--figure", choices=FIGURES, default="networks")
    cmd.add_argument("--formats", default="png,svg")
    args = parser.parse_args(argv)

    try:
        written = render(args.csv, args.out_dir, figure=args.figure,
                         formats=tuple(args.formats.split(",")))
    except (CsvContractError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    for path in written:
        print(path)
    return 0


if __name__ == "__main__":
    sys.exit(main())
