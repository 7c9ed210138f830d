"""Distinct function evaluations per scheme for n = 1..N, from enumerated sample plans.

Each count comes from deduplicating the actual plan; the closed form is
printed alongside and any disagreement is flagged.
"""
import argparse
import csv
import sys

import numpy as np

from simplexderiv.directions import EVAL_COUNT_FORMULAS, SchemeSpec, closed_form_count
from simplexderiv.estimators import scheme_plan

KINDS = ["gsh-minimal", "gcsh-minimal", "offdiag", "offdiag-gcsh", "diag", "row", "row-gcsh", "hvp-gsh", "hvp-gcsh"]


def table(n_max: int = 8) -> list[dict]:
    rows = []
    for n in range(1, n_max + 1):
        row = {"n": n}
        for kind in KINDS:
            if kind.startswith("offdiag") and n < 2:
                row[kind] = ""
                continue
            spec = SchemeSpec(kind, n, h=0.1, row=0, v=tuple(np.ones(n)) if kind.startswith("hvp") else None)
            count = scheme_plan(spec, np.zeros(n)).count
            expected = closed_form_count(spec)[1]
            row[kind] = count if count == expected else f"{count}!={expected}"
        rows.append(row)
    return rows


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--n-max", type=int, default=8)
    parser.add_argument("--csv", action="store_true", help="write CSV to stdout")
    args = parser.parse_args()
    rows = table(args.n_max)
    if args.csv:
        writer = csv.DictWriter(sys.stdout, fieldnames=list(rows[0]), lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)
        return
    print("formulas: " + ", ".join(f"{k} {EVAL_COUNT_FORMULAS[k][0]}" for k in KINDS))
    print(" ".join(f"{h:>13}" for h in rows[0]))
    for r in rows:
        print(" ".join(f"{str(v):>13}" for v in r.values()))


if __name__ == "__main__":
    main()
