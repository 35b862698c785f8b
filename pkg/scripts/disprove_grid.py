"""Residual scan of both Montgomery identities over a (function, q, x) grid.

Writes one CSV row per point and prints the worst residuals per function.

    python scripts/disprove_grid.py --out residuals.csv
"""

import argparse
import csv
import math

from qmont import QContext, RealFn, check_identity, lattice_nodes

FUNCS = {
    "t": lambda t: t,
    "t^2": lambda t: t * t,
    "exp(t)": math.exp,
    "sin(t)": math.sin,
}


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--out", default="residuals.csv")
    parser.add_argument("--points", type=int, default=50)
    parser.add_argument("-a", type=float, default=0.0)
    parser.add_argument("-b", type=float, default=1.0)
    args = parser.parse_args()

    qs = [round(0.1 * i, 1) for i in range(1, 10)]
    with open(args.out, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["function", "q", "x", "node", "residual_original", "residual_corrected", "converged"])
        for name, fn in FUNCS.items():
            f = RealFn(fn, name)
            worst_orig = worst_corr = 0.0
            for q in qs:
                ctx = QContext(q, args.a, args.b)
                xs = [args.a + ctx.width * i / (args.points + 1) for i in range(1, args.points + 1)]
                for x in xs + lattice_nodes(ctx, 5):
                    rep = check_identity(f, ctx, x)
                    worst_orig = max(worst_orig, abs(rep.residual_original))
                    worst_corr = max(worst_corr, abs(rep.residual_corrected))
                    writer.writerow(
                        [name, q, repr(x), repr(rep.node), repr(rep.residual_original),
                         repr(rep.residual_corrected), rep.converged]
                    )
            print(f"{name:8s} max|original residual| = {worst_orig:.3e}   max|corrected residual| = {worst_corr:.3e}")
    print(f"wrote {args.out}")


if __name__ == "__main__":
    main()
