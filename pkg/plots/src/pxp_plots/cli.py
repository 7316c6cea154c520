"""`pxp-render <run_dir> [--kind ...] [--out ...]`: figures from run dirs."""

from __future__ import annotations

import argparse
import sys

from .contract import ContractError
from .render import KINDS, render


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="pxp-render",
        description="Render publication-style figures from a driven-pxp "
                    "run directory")
    parser.add_argument("run_dir", help="completed run directory")
    parser.add_argument("--kind", default=None, choices=KINDS,
                        help="figure kind (default: the manifest's scenario)")
    parser.add_argument("--out", default=None, help="output directory "
                        "(default: the run directory)")
    args = parser.parse_args(argv)
    try:
        written = render(args.run_dir, kind=args.kind, out_dir=args.out)
    except ContractError as exc:
        print(f"render error: {exc}", file=sys.stderr)
        return 1
    for path in written:
        print(path)
    return 0


if __name__ == "__main__":
    sys.exit(main())
