#!/usr/bin/env python3
"""Tabulate the limiting critical density of the large-v1 regime,
a_star_min(kappa1), over a logarithmic kappa1 grid."""

import argparse
import sys

import numpy as np

from rectlat.critical import a_star_min_zero_limit
from rectlat.phasescan import rows_to_csv, scan_a_star_min
from rectlat.quadrature import QuadratureConfig


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--kappa1-min", type=float, default=0.1)
    ap.add_argument("--kappa1-max", type=float, default=50.0)
    ap.add_argument("--points", type=int, default=40)
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--output", default=None)
    ns = ap.parse_args()

    q = QuadratureConfig()
    grid = np.geomspace(ns.kappa1_min, ns.kappa1_max, ns.points)
    rows = scan_a_star_min(grid, q, workers=ns.workers)
    rows.append((0.0, a_star_min_zero_limit(q), "kappa1->0 limit"))
    text = rows_to_csv(rows, "kappa1,a_star_min,status")
    if ns.output:
        with open(ns.output, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


if __name__ == "__main__":
    main()
