"""CLI: `lrc-mld-plot render --kind {fig1|fig2|weights} --in CSV [--in CSV] --out IMG`."""

from __future__ import annotations

import argparse
import sys

from .render import PlotSpec, SchemaError, render


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lrc-mld-plot")
    sub = parser.add_subparsers(dest="command", required=True)
    rend = sub.add_parser("render", help="render a figure from simulator CSVs")
    rend.add_argument("--kind", choices=["fig1", "fig2", "weights"], required=True)
    rend.add_argument("--in", dest="inputs", action="append", required=True,
                      help="input CSV (repeatable)")
    rend.add_argument("--out", required=True, help="output image (.png or .svg)")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    spec = PlotSpec(kind=args.kind, inputs=tuple(args.inputs), output=args.out)
    try:
        render(spec)
    except SchemaError as exc:
        print(f"schema error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
