"""CLI: `plots render --spec fig.json [--spec more.json ...]`."""

from __future__ import annotations

import argparse
import sys

from .figures import FigureSpec, PlotsError, render


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="plots", description="Render figures from simulator CSV output")
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("render")
    p.add_argument("--spec", action="append", required=True,
                   help="figure spec JSON (repeatable)")
    args = parser.parse_args(argv)

    status = 0
    for spec_path in args.spec:
        try:
            out = render(FigureSpec.from_json(spec_path))
            print(f"wrote {out}")
        except (OSError, PlotsError, ValueError) as err:
            print(f"error in {spec_path}: {err}", file=sys.stderr)
            status = 1
    return status


if __name__ == "__main__":
    sys.exit(main())
