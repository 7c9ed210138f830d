"""Empirical convergence orders on a smooth test function.

Writes one CSV per scheme (radius, error, evaluations) to the output
directory and prints the fitted slopes.
"""
import argparse
import os
from pathlib import Path

from simplexderiv.directions import SchemeSpec
from simplexderiv.harness import convergence_order, geometric_radii, get_function

SCHEMES = {
    "gsh-minimal": 1, "gcsh-minimal": 2, "cshd": 2, "diag": 2, "row": 1, "row-gcsh": 2,
    "offdiag": 1, "offdiag-gcsh": 2, "hvp-gsh": 1, "hvp-gcsh": 2,
}


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--function", default="expsin3")
    parser.add_argument("--h0", type=float, default=0.1)
    parser.add_argument("--ratio", type=float, default=0.5)
    parser.add_argument("--count", type=int, default=8)
    parser.add_argument("--outdir", default=os.environ.get("SIMPLEXDERIV_OUTDIR", "results"))
    args = parser.parse_args()

    func = get_function(args.function)
    x0 = func.x0 if func.x0 is not None else [0.3] * func.n
    radii = geometric_radii(args.h0, args.ratio, args.count)
    outdir = Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    print(f"{'scheme':>14} {'expected':>8} {'fitted':>8} {'evals':>6}")
    for kind, expected in SCHEMES.items():
        if kind.startswith("offdiag") and func.n < 2:
            continue
        spec = SchemeSpec(kind, func.n, row=0, v=(1.0,) * func.n if kind.startswith("hvp") else None)
        report = convergence_order(spec, func, x0, radii)
        (outdir / f"sweep_{func.name}_{kind}.csv").write_text(report.to_csv())
        slope = "exact" if report.exact else f"{report.slope:.3f}"
        print(f"{kind:>14} {expected:>8} {slope:>8} {report.evaluations[0]:>6}")
    print(f"CSV files in {outdir}")


if __name__ == "__main__":
    main()
