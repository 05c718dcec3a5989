"""figkit: render figure analogs from fourspin CSV files.

One subcommand per figure; every subcommand takes the input CSV paths in
order plus --out for the image path (PNG by default, SVG by extension).
Missing or parameter-mismatched CSVs abort with a nonzero exit code and no
image file.
"""

from __future__ import annotations

import argparse
import sys

from .csvio import FigureInputError
from .render import FIGURES, render


def build_parser():
    parser = argparse.ArgumentParser(prog="figkit", description=__doc__)
    subs = parser.add_subparsers(dest="figure", required=True)
    for name, (fn, n_inputs) in FIGURES.items():
        want = "exactly %d" % n_inputs if n_inputs else "one or more"
        s = subs.add_parser(name, help=f"{fn.__doc__.splitlines()[0]} ({want} CSVs)")
        s.add_argument("csvs", nargs="+", metavar="CSV")
        s.add_argument("--out", required=True, help="output image path (.png/.svg)")
    return parser


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code else 0
    try:
        render(args.figure, args.csvs, args.out)
    except FigureInputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(args.out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
