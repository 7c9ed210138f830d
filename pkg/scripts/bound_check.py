"""Measured projected errors against the error bounds on the polynomial test functions.

Prints, for each function and scheme, the largest measured/bound ratio over a
radius sweep; exits nonzero if any bound is violated.
"""
import argparse
import sys

import numpy as np

from simplexderiv.directions import SchemeSpec
from simplexderiv.harness import REGISTRY, verify_bound

SCHEMES = ["gsh-minimal", "gcsh-minimal", "diag", "cshd", "offdiag", "offdiag-gcsh", "row", "row-gcsh",
           "hvp-gsh", "hvp-gcsh"]


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--functions", default="quartic3,rosenbrock2,mixed4")
    parser.add_argument("--levels", type=int, default=7, help="radii 0.1 * 2**-k for k < levels")
    args = parser.parse_args()
    radii = [0.1 * 2.0**-k for k in range(args.levels)]
    ok = True
    for name in args.functions.split(","):
        func = REGISTRY[name]
        x0 = np.array(func.x0 if func.x0 is not None else [0.3] * func.n)
        for kind in SCHEMES:
            if kind.startswith("offdiag") and func.n < 2:
                continue
            spec = SchemeSpec(kind, func.n, row=0, v=(1.0,) * func.n if kind.startswith("hvp") else None)
            checks = verify_bound(spec, func, x0, radii)
            ok &= all(c.passed for c in checks)
            for bound_name in dict.fromkeys(c.bound_name for c in checks):
                ratio = max(c.measured / c.bound for c in checks if c.bound_name == bound_name)
                flag = "" if all(c.passed for c in checks if c.bound_name == bound_name) else "  VIOLATED"
                print(f"{name:>12} {kind:>14} {bound_name:>14}  max measured/bound {ratio:.4f}{flag}")
    sys.exit(0 if ok else 1)


if __name__ == "__main__":
    main()
