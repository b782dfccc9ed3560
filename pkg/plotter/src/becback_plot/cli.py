"""becback-plot: render one standard figure from a directory of becback CSVs.

Usage: becback-plot <fig-id> --in <dir> --out <file> [--png]

The input directory is scanned for `<fig-id>_*.csv`; headers are validated
before anything is drawn.  Exit codes: 0 success, 2 usage or validation
error, 3 I/O error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .render import FIGURE_IDS, PlotJob, ValidationError, render


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="becback-plot",
        description="Render becback figure data into an image")
    parser.add_argument("fig_id", choices=FIGURE_IDS + tuple("12345"),
                        help="figure to render")
    parser.add_argument("--in", dest="in_dir", default=".",
                        help="directory holding the becback CSV files")
    parser.add_argument("--out", default=None,
                        help="output image path (default <fig-id>.svg)")
    parser.add_argument("--png", action="store_true",
                        help="write PNG instead of SVG")
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    fig_id = args.fig_id if args.fig_id.startswith("fig") else f"fig{args.fig_id}"
    ext = "png" if args.png else "svg"
    out = Path(args.out) if args.out else Path(f"{fig_id}.{ext}")
    inputs = tuple(sorted(Path(args.in_dir).glob(f"{fig_id}_*.csv")))
    job = PlotJob(figure_id=fig_id, inputs=inputs, output=out, png=args.png)
    try:
        print(render(job))
    except ValidationError as exc:
        print(f"becback-plot: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"becback-plot: I/O error: {exc}", file=sys.stderr)
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
