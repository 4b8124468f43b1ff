#!/usr/bin/env python3
"""Measure the headline scaling quotients and dump (lambda, value, predicted) CSVs.

Each output CSV feeds `hypfourier plot loglog` directly; the third column
carries the predicted exponent so the plot can draw the reference line.

    python3 scripts/scaling_tables.py [outdir]
"""

import pathlib
import sys

import numpy as np

from hypfourier.geometry import ModelParams
from hypfourier.norms import lp_norm_polar
from hypfourier.specfun import spherical_batch
from hypfourier.transform import RadialFunction
from hypfourier.verify import (
    DEFAULT_LAMBDAS,
    _knapp_family_ratio,
    _lp_radial_grid,
    _radial_family_ratio,
)

CASES = (
    # (name, d, p, family, predicted slope)
    ("projector_radial_d3_p6", 3, 6.0, "radial", 1.0),
    ("projector_radial_d2_p8", 2, 8.0, "radial", 0.5),
    ("projector_knapp_d3_p3", 3, 3.0, "knapp", 1.0 / 3.0),
    ("projector_knapp_d2_p4", 2, 4.0, "knapp", 0.25),
    ("phinorm_d3_p6", 3, 6.0, "norm", -0.5),
    ("phinorm_d2_p3", 2, 3.0, "norm", -0.5),
)


def measure(d: int, p: float, family: str, lam: float, rg) -> float:
    params = ModelParams(d)
    if family == "radial":
        return _radial_family_ratio(params, p, lam, rg)
    if family == "knapp":
        return _knapp_family_ratio(params, p, lam)
    phi = spherical_batch(float(lam), rg.nodes, params)
    return lp_norm_polar(RadialFunction(rg, phi, params), p)


def main() -> int:
    outdir = pathlib.Path(sys.argv[1] if len(sys.argv) > 1 else "scaling_tables")
    outdir.mkdir(parents=True, exist_ok=True)
    for name, d, p, family, predicted in CASES:
        rg = _lp_radial_grid(d, p, max(DEFAULT_LAMBDAS))
        rows = ["lambda,value,predicted"]
        for lam in DEFAULT_LAMBDAS:
            val = measure(d, p, family, lam, rg)
            rows.append(f"{lam:.16e},{val:.16e},{predicted:.16e}")
        path = outdir / f"{name}.csv"
        path.write_text("\n".join(rows) + "\n", encoding="utf-8")
        pts = np.loadtxt(path, delimiter=",", skiprows=1)
        slope = np.polyfit(np.log(pts[:, 0]), np.log(pts[:, 1]), 1)[0]
        print(f"{name:28s} predicted {predicted:+.4f}  fitted {slope:+.4f}  -> {path}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
