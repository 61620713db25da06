#!/usr/bin/env python3
"""Render one of the seven standard figures from a harness CSV.

Usage:
    render_figure.py --figure N --in fig_N.csv --out fig_N.png

Output format follows the --out extension (.png or .svg).  The input CSV
is validated against the figure's documented column schema; mismatches
fail with an explicit column diff.  Rendering is deterministic: identical
input bytes produce identical output bytes.
"""

import argparse
import os
import sys

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

import style  # noqa: F401  (must be imported before any pyplot use)
from heatmap import render_heatmap
from lineplots import render_errorbars, render_lines
from manifests import MANIFESTS, SchemaError, load

RENDERERS = {
    1: render_lines,
    2: render_lines,
    3: render_lines,
    4: render_lines,
    5: render_errorbars,
    6: render_lines,
    7: render_heatmap,
}


def render(figure, csv_path, out_path):
    manifest = MANIFESTS[figure]
    df = load(csv_path, manifest)
    return RENDERERS[figure](df, manifest, out_path)


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--figure", type=int, required=True, choices=sorted(MANIFESTS))
    parser.add_argument("--in", dest="csv_path", required=True, metavar="CSV")
    parser.add_argument("--out", dest="out_path", required=True, metavar="PNG/SVG")
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        path = render(args.figure, args.csv_path, args.out_path)
    except (SchemaError, ValueError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(f"wrote {path}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
