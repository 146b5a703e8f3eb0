"""Command line: sheardamp-plots <decay|envelope|lifespan> --input ... --out ...

Options ride on the solver's dotted-key flag style, e.g.
`--set window=10,100 --set s=3 --set epsilon=0.05`.
"""

from __future__ import annotations

import argparse
import json
import sys

from .figures import RENDERERS
from .spec import KINDS, PlotSpec, PlotSpecError, apply_option


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sheardamp-plots",
        description="Batch figure rendering for sheardamp NDJSON outputs",
    )
    sub = parser.add_subparsers(dest="kind", required=True)
    for kind in KINDS:
        p = sub.add_parser(kind)
        p.add_argument("--input", action="append", required=True,
                       help="NDJSON input path (repeatable)")
        p.add_argument("--out", required=True, help="output image path")
        p.add_argument("--set", action="append", default=[], metavar="KEY=VALUE")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        spec = PlotSpec(inputs=args.input, output=args.out, kind=args.kind)
        for item in args.set:
            if "=" not in item:
                raise PlotSpecError(f"option must look like key=value, got {item!r}")
            key, value = item.split("=", 1)
            apply_option(spec, key, value)
        result = RENDERERS[spec.kind](spec)
    except (PlotSpecError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(json.dumps({"output": result.output, "fits": result.fits}))
    return 0


if __name__ == "__main__":
    sys.exit(main())
