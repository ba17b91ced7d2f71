"""Tabulate beta(c), its log-derivative and the round trip through solve_c.

    python scripts/beta_curve.py --c-min 1e-6 --c-max 50 --n 200
"""

import argparse
import csv
import os
from pathlib import Path

import numpy as np

from awbgk.config import OUTPUT_ROOT_ENV
from awbgk.equilibrium import beta, beta_limit_zero, log_beta_derivative, solve_c


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--c-min", type=float, default=1e-6)
    ap.add_argument("--c-max", type=float, default=50.0)
    ap.add_argument("--n", type=int, default=200)
    ap.add_argument("--out", default="beta_curve.csv")
    args = ap.parse_args()

    cs = np.geomspace(args.c_min, args.c_max, args.n)
    bound = beta_limit_zero()
    out = Path(args.out)
    if not out.is_absolute():
        out = Path(os.environ.get(OUTPUT_ROOT_ENV, ".")) / out
    worst = 0.0
    with open(out, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["c", "beta", "dlogbeta_dc", "solve_c_rel_err"])
        for c in cs:
            b = beta(c)
            err = abs(solve_c(b) / c - 1.0)
            worst = max(worst, err)
            w.writerow([format(x, ".17g") for x in (c, b, log_beta_derivative(c), err)])
    print(f"beta(0+) = {bound:.15f}")
    print(f"beta({cs[0]:g}) = {beta(cs[0]):.15f}, beta({cs[-1]:g}) = {beta(cs[-1]):.3e}")
    print(f"worst round-trip relative error = {worst:.2e}")
    print(f"written to {out}")


if __name__ == "__main__":
    main()
