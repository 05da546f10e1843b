"""Command-line wrapper: render figures from sweep result files."""
from __future__ import annotations

import argparse
import sys

from .plotting import AXIS_MODES, PlotSpec, plot_diameter_scaling, plot_edge_histogram

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_IO = 3


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="percplots",
        description="Figures from percolation sweep CSV/JSON results.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("diameter", help="diameter vs N with fitted curve")
    p.add_argument("--csv", required=True)
    p.add_argument("--summary", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--label", default="")
    p.add_argument("--axis", choices=AXIS_MODES, default=None)

    p = sub.add_parser("histogram", help="edge-length band counts")
    p.add_argument("--observables", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--label", default="")
    return parser


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    try:
        if args.command == "diameter":
            report = plot_diameter_scaling(PlotSpec(
                csv_path=args.csv, summary_path=args.summary,
                output_path=args.out, regime_label=args.label,
                axis_mode=args.axis,
            ))
        else:
            report = plot_edge_histogram(PlotSpec(
                observables_path=args.observables, output_path=args.out,
                regime_label=args.label,
            ))
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO if isinstance(exc, OSError) else EXIT_USAGE
    print(f"wrote {report['output']} ({report['annotation']})")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
