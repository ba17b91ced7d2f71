"""RK4 error against the closed-form solution as dt is halved.

    python scripts/rk4_convergence.py --stats be --out rk4_be.csv
"""

import argparse
import csv
import math
import os
from pathlib import Path

from awbgk.acceptance import matched_shell
from awbgk.config import OUTPUT_ROOT_ENV
from awbgk.dynamics import SolverConfig, simulate
from awbgk.quadrature import default_grid


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--stats", choices=["mb", "be"], default="mb")
    ap.add_argument("--t-end", type=float, default=10.0)
    ap.add_argument("--levels", type=int, default=5, help="number of dt halvings from 0.4")
    ap.add_argument("--out", default="rk4_convergence.csv")
    args = ap.parse_args()

    grid = default_grid()
    F0 = matched_shell(grid, args.stats)
    rows = []
    prev = None
    for i in range(args.levels):
        dt = 0.4 / 2**i
        traj = simulate(F0, SolverConfig(dt=dt, t_end=args.t_end, stepper="rk4", statistics=args.stats))
        err = traj.max_analytic_deviation()
        order = math.log2(prev / err) if prev and err > 0 else float("nan")
        rows.append((dt, err, order))
        print(f"dt = {dt:<8g} max error = {err:.3e}  observed order = {order:.2f}")
        prev = err

    out = Path(args.out)
    if not out.is_absolute():
        out = Path(os.environ.get(OUTPUT_ROOT_ENV, ".")) / out
    with open(out, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["dt", "max_error", "observed_order"])
        w.writerows([[format(x, ".17g") for x in r] for r in rows])
    print(f"written to {out}")


if __name__ == "__main__":
    main()
