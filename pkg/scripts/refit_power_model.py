#!/usr/bin/env python3
"""Refit the closed-form sample-size model from empirical required-n data.

Input: a CSV with columns m,l,d,n_r — one row per (feature-space size,
selected-feature count, effect size) cell, with the empirically measured
required sample size (e.g. produced by sweeping experiment_required_n.py
over the grid).  Fits one shifted power curve n_r(D) per (m, l) cell,
then one plane per power-curve coefficient, and writes a PowerModel JSON
that the calculators and the CLI --model flag accept.  The shipped
confidence grid is carried over unchanged.
"""

import argparse
import csv
import sys
from collections import defaultdict
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from cvpower.calculator import PowerModel, default_power_model  # noqa: E402
from cvpower.curvefit import fit_plane, fit_power_curve  # noqa: E402


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("csv", help="CSV with columns m,l,d,n_r")
    ap.add_argument("--out", default="results/power_model.json")
    args = ap.parse_args()

    cells = defaultdict(list)
    with open(args.csv, newline="", encoding="utf-8") as fh:
        for row in csv.DictReader(fh):
            cells[(int(row["m"]), int(row["l"]))].append(
                (float(row["d"]), float(row["n_r"]))
            )

    a_pts, b_pts, c_pts = [], [], []
    for (m, l), points in sorted(cells.items()):
        points.sort()
        fit = fit_power_curve([p[0] for p in points], [p[1] for p in points])
        print(f"cell m={m} l={l}: a={fit.a:.4f} b={fit.b:.4f} c={fit.c:.4f} "
              f"(rmse {fit.residual_rmse:.3g})")
        a_pts.append(((l, m), fit.a))
        b_pts.append(((l, m), fit.b))
        c_pts.append(((l, m), fit.c))

    model = PowerModel(
        plane_a=fit_plane(a_pts),
        plane_b=fit_plane(b_pts),
        plane_c=fit_plane(c_pts),
        grid=default_power_model().grid,
    )
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    model.save(out)
    print(f"plane a: {model.plane_a}")
    print(f"plane b: {model.plane_b}")
    print(f"plane c: {model.plane_c}")
    print(f"model written to {out}")


if __name__ == "__main__":
    main()
