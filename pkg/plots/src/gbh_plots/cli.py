"""Entry point: ``plot_curves <csv> <out-image> [--x <col>] [--alpha <a>]``."""

from __future__ import annotations

import argparse
import sys

from . import FigureSpec, PlotsError, render_curves


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="plot_curves",
        description="Render FDR/power curves from a gbh simulate CSV.",
    )
    parser.add_argument("csv", help="result CSV written by 'gbh simulate'")
    parser.add_argument("out", help="output image path (.png, .pdf, .svg, ...)")
    parser.add_argument("--x", default=None, help="x-axis column (auto-detected)")
    parser.add_argument("--alpha", type=float, default=None,
                        help="reference level for the FDR panels "
                             "(default: the CSV's alpha column)")
    parser.add_argument("--panels", default=None,
                        help="comma-separated panel key columns (auto-detected)")
    parser.add_argument("--series", default="procedure",
                        help="series column (default: procedure)")
    args = parser.parse_args(argv)
    panels = tuple(args.panels.split(",")) if args.panels else None
    spec = FigureSpec(
        csv_path=args.csv, out_path=args.out, x=args.x,
        series=args.series, panels=panels, alpha=args.alpha,
    )
    try:
        render_curves(spec)
    except PlotsError as exc:
        print(f"plot_curves: error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"plot_curves: error: {exc}", file=sys.stderr)
        return 3
    return 0


def entrypoint():
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
