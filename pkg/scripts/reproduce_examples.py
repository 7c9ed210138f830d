"""Recompute the two worked diagonal examples on f = -2 x1^4 + x2^4 + 10 x3^4 at (2, -2, 5).

Prints the GCSH (with T_j = -s^j) and CSHD for each direction matrix next to
the reference values.
"""
import argparse
import json

import numpy as np

from simplexderiv.directions import EXAMPLE1_S, EXAMPLE2_S, DirectionMatrix
from simplexderiv.estimators import cshd, gcsh
from simplexderiv.harness import get_function

REFERENCE = {
    "example1": {"gcsh": np.diag([-96.04, 48.068, 0.0]), "cshd": [-96.04, 48.0765, 0.0]},
    "example2": {"gcsh": np.array([[-96.04, 0, 0], [72.03, -24.01, 0], [0, 0, 0]]), "cshd": [-96.04, 48.02, 0.0]},
}


def run(tol: float = 5e-3) -> dict:
    f = get_function("quartic3")
    x0 = np.array(f.x0)
    out = {}
    for name, S in (("example1", EXAMPLE1_S), ("example2", EXAMPLE2_S)):
        family = [-DirectionMatrix(c) for c in DirectionMatrix(S).columns]
        G = gcsh(f, x0, S, family)
        d = cshd(f, x0, S)
        ref = REFERENCE[name]
        out[name] = {
            "gcsh": G.tolist(),
            "cshd": d.tolist(),
            "gcsh_max_abs_diff": float(np.abs(G - ref["gcsh"]).max()),
            "cshd_max_abs_diff": float(np.abs(d - ref["cshd"]).max()),
        }
        out[name]["within_tol"] = max(out[name]["gcsh_max_abs_diff"], out[name]["cshd_max_abs_diff"]) <= tol
    return out


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--json", action="store_true", help="print JSON instead of text")
    args = parser.parse_args()
    res = run()
    if args.json:
        print(json.dumps(res, indent=2))
        return
    np.set_printoptions(precision=6, suppress=True)
    for name, r in res.items():
        print(f"== {name}")
        print("GCSH:\n", np.array(r["gcsh"]))
        print("reference:\n", REFERENCE[name]["gcsh"])
        print("CSHD:", np.array(r["cshd"]), " reference:", np.array(REFERENCE[name]["cshd"]))
        print(f"max |diff| gcsh {r['gcsh_max_abs_diff']:.2e}  cshd {r['cshd_max_abs_diff']:.2e}  "
              f"{'ok' if r['within_tol'] else 'MISMATCH'}")


if __name__ == "__main__":
    main()
