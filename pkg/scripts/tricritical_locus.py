#!/usr/bin/env python3
"""Trace the tricritical locus (A_t, v1_t) of the double-Yukawa family
against kappa1, together with the existence-window bounds."""

import argparse
import sys

import numpy as np

from rectlat.phasescan import rows_to_csv, scan_tricritical_locus
from rectlat.quadrature import QuadratureConfig


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--kappa1-min", type=float, default=1.45)
    ap.add_argument("--kappa1-max", type=float, default=2.03)
    ap.add_argument("--points", type=int, default=64)
    ap.add_argument("--skip-bounds", action="store_true")
    ap.add_argument("--output", default=None)
    ns = ap.parse_args()

    grid = np.linspace(ns.kappa1_min, ns.kappa1_max, ns.points)
    rows, bounds = scan_tricritical_locus(
        grid, QuadratureConfig(), with_bounds=not ns.skip_bounds
    )
    if bounds is not None:
        rows.append((bounds[0], None, None, "kappa1-lower"))
        rows.append((bounds[1], None, None, "kappa1-upper"))
    text = rows_to_csv(rows, "kappa1,a_t,v1_t,status")
    if ns.output:
        with open(ns.output, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


if __name__ == "__main__":
    main()
