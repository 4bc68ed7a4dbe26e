"""Command line: effcap-plot --kind vs-snr --in a.csv b.csv --out fig1.png"""

import argparse
import sys

from .reader import EmptySeriesError, SchemaError
from .render import FigureKind, PlotJob, render


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="effcap-plot",
        description="Render effcap sweep CSVs as rate-vs-SNR or rate-vs-antennas charts")
    parser.add_argument("--kind", required=True, choices=[k.value for k in FigureKind])
    parser.add_argument("--in", dest="inputs", nargs="+", required=True,
                        metavar="CSV", help="sweep CSV files (schema 1)")
    parser.add_argument("--out", required=True, help="output image path")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    job = PlotJob(inputs=tuple(args.inputs), kind=FigureKind(args.kind),
                  output=args.out)
    try:
        series = render(job)
    except (SchemaError, EmptySeriesError, OSError) as exc:
        sys.stderr.write(f"effcap-plot: {exc}\n")
        return 1
    sys.stderr.write(f"effcap-plot: wrote {args.out} ({len(series)} series)\n")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
