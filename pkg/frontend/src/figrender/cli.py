"""``render`` entry point."""

from __future__ import annotations

import argparse
import sys

from .plotting import RenderError, render


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(
        prog="render",
        description="render the relaxation comparison figure from solver CSVs")
    ap.add_argument("--curves", nargs="+", required=True,
                    help="curve CSVs (header t,sigma_re,sigma_im,scenario)")
    ap.add_argument("--fits", default=None,
                    help="decay-fit report CSV; omit to render unannotated")
    ap.add_argument("--out", required=True, help="output PNG path")
    args = ap.parse_args(argv)
    try:
        info = render(args.curves, args.fits, args.out)
    except RenderError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(info["out"])
    return 0


if __name__ == "__main__":
    sys.exit(main())
