"""plots <kind> --in file.csv --out fig.svg

Batch figure rendering for the fptsim CSV schemas; see fptplots.figures.KINDS.
"""

import argparse
import sys

from fptplots.figures import KINDS, FigureSpec, render
from fptplots.io import SchemaError


def build_parser():
    parser = argparse.ArgumentParser(prog="plots",
                                     description="Render fptsim CSVs as figures")
    parser.add_argument("kind", choices=KINDS)
    parser.add_argument("--in", dest="input_csv", required=True,
                        help="input CSV (fptsim schema for the kind)")
    parser.add_argument("--out", dest="output_path", required=True,
                        help="output image (.svg or .png)")
    parser.add_argument("--title")
    parser.add_argument("--xlabel")
    parser.add_argument("--ylabel")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    spec = FigureSpec(kind=args.kind, input_csv=args.input_csv,
                      output_path=args.output_path, title=args.title,
                      xlabel=args.xlabel, ylabel=args.ylabel)
    try:
        path = render(spec)
    except SchemaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(f"wrote {path}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
