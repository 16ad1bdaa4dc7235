#!/usr/bin/env python3
"""Produce the double-Yukawa phase-diagram dataset at fixed kappa1.

Sweeps the repulsive strength v1 from just above the admissibility
border up to a configurable maximum, emitting the second-order critical
curve, the first-order coexistence points, and the tricritical point.
"""

import argparse
import math
import sys

import numpy as np

from rectlat.critical import find_tricritical
from rectlat.phasescan import SCAN_CSV_HEADER, PhaseDiagramRow, rows_to_csv, scan_critical_curve
from rectlat.quadrature import QuadratureConfig


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--kappa1", type=float, default=2.0)
    ap.add_argument("--v1-max", type=float, default=60.0)
    ap.add_argument("--points", type=int, default=64)
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--output", default=None)
    ns = ap.parse_args()

    q = QuadratureConfig()
    border = math.exp(ns.kappa1) / ns.kappa1
    v1_grid = np.geomspace(border * 1.002, ns.v1_max, ns.points)

    tc = find_tricritical("double-yukawa", ns.kappa1, q=q)
    # double the sweep resolution locally around the tricritical strength,
    # where the curve changes character
    near = (v1_grid > 0.9 * tc.param_t) & (v1_grid < 1.1 * tc.param_t)
    if near.any():
        mids = 0.5 * (v1_grid[:-1] + v1_grid[1:])[near[:-1] & near[1:]]
        v1_grid = np.sort(np.concatenate([v1_grid, mids]))
    rows = scan_critical_curve(ns.kappa1, v1_grid=v1_grid, q=q, workers=ns.workers)
    rows.append(
        PhaseDiagramRow(
            family="double-yukawa",
            kappa1=ns.kappa1,
            v1=tc.param_t,
            a_star=tc.a_t,
            order="tricritical",
            eps_jump=0.0,
            e2_residual=tc.residuals[0],
            e4_value=tc.residuals[1],
            status="ok",
        )
    )

    text = rows_to_csv(rows, SCAN_CSV_HEADER)
    if ns.output:
        with open(ns.output, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


if __name__ == "__main__":
    main()
