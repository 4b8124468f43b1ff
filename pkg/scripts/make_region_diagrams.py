#!/usr/bin/env python3
"""Render the resolvent / derivative-resolvent exponent diagrams.

Writes one SVG per dimension with both diagrams side by side, the
classified grid points scattered on top, and the exponent tables that
feed them:

    python3 scripts/make_region_diagrams.py [outdir] [d ...]
"""

import pathlib
import sys

from hypfourier.cli import RunConfig, cmd_plot, cmd_table


def main() -> int:
    args = sys.argv[1:]
    outdir = pathlib.Path(args[0]) if args else pathlib.Path("figures")
    dims = tuple(int(a) for a in args[1:]) or (2, 3)
    outdir.mkdir(parents=True, exist_ok=True)
    for d in dims:
        cfg = RunConfig(dimensions=(d,))
        table = outdir / f"exponents_d{d}.csv"
        cmd_table("exponents", cfg, table)
        svg = outdir / f"regions_d{d}.svg"
        cmd_plot("region-diagram", str(table), cfg, svg)
        print(f"d={d}: {table}  {svg}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
