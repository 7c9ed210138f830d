"""Experiment hook: how much of a Tressian-diagonal plan does a prior GCSH plan already cover?

For each coordinate i, the order-3 recursion with S = T = U = h e^i needs the
points x0 + k h e^i, k = 0..3. This script counts how many of those (and of
the centered variant with -h e^i at the inner levels) already appear in the
GCSH plan for the same x0 and h. It reports coverage only; whether a cheap
order-1 Tressian diagonal can be built from reused points is left open.
"""
import argparse

import numpy as np

from simplexderiv.directions import SchemeSpec
from simplexderiv.estimators import scheme_plan
from simplexderiv.sampling import enumerate_tensor_plan


def coverage(n: int, h: float, x0=None) -> list[dict]:
    x0 = np.zeros(n) if x0 is None else np.asarray(x0, dtype=float)
    have = scheme_plan(SchemeSpec("gcsh-minimal", n, h=h), x0).keys()
    rows = []
    for i in range(n):
        e = np.zeros((n, 1))
        e[i, 0] = h
        for label, mats in (("forward", [e, e, e]), ("mixed-sign", [e, -e, e])):
            need = enumerate_tensor_plan(x0, mats).keys()
            rows.append({"i": i + 1, "variant": label, "needed": len(need), "covered": len(need & have)})
    return rows


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--n", type=int, default=3)
    parser.add_argument("--h", type=float, default=1e-2)
    args = parser.parse_args()
    for r in coverage(args.n, args.h):
        print(f"i={r['i']} {r['variant']:>10}: {r['covered']} of {r['needed']} points already in the GCSH plan")


if __name__ == "__main__":
    main()
