"""`plot` command: render one figure from a sweep aggregate CSV."""

from __future__ import annotations

import argparse
import sys

from .render import FIGURE_KINDS, MissingColumnError, PlotSpec, render


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="plot", description="Render sweep aggregate figures.")
    parser.add_argument("--csv", required=True, help="aggregate CSV path")
    parser.add_argument("--kind", required=True, choices=FIGURE_KINDS)
    parser.add_argument("--out", required=True, help="output image path")
    parser.add_argument("--delta", type=float, default=None,
                        help="horizontal reference line level")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    spec = PlotSpec(input_csv=args.csv, figure_kind=args.kind,
                    output_image=args.out, delta_line=args.delta)
    try:
        print(render(spec))
        return 0
    except MissingColumnError as exc:
        print(f"error: missing column {exc.column!r}", file=sys.stderr)
        return 1
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
