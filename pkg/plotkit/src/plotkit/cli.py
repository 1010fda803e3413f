"""`plot` entry point: one CSV in, one image out."""

import argparse
import sys

from .errors import PlotkitError
from .figures import PlotSpec, plot_heatmap, plot_lines


def build_parser():
    parser = argparse.ArgumentParser(
        prog="plot", description="Render a tomography sweep CSV."
    )
    parser.add_argument("--csv", required=True, help="sweep CSV path")
    parser.add_argument("--kind", required=True, choices=("lines", "heatmap"))
    parser.add_argument("--metric", required=True, help="metric column value to plot")
    parser.add_argument("--group", default="scenario", help="curve grouping column (lines)")
    parser.add_argument("--level", type=float, default=None, help="contour level (heatmap)")
    parser.add_argument("--scenario", default=None, help="scenario filter (heatmap)")
    parser.add_argument("--title", default=None)
    parser.add_argument("--cmap", default="viridis")
    parser.add_argument("--out", required=True, help="output image path (.svg default style)")
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    spec = PlotSpec(
        csv_path=args.csv,
        kind=args.kind,
        metric=args.metric,
        out_path=args.out,
        group=args.group,
        level=args.level,
        scenario=args.scenario,
        title=args.title,
        cmap=args.cmap,
    )
    try:
        path = plot_lines(spec) if args.kind == "lines" else plot_heatmap(spec)
    except PlotkitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(path)
    return 0


if __name__ == "__main__":
    sys.exit(main())
