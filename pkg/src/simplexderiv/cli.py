"""Command-line front end: ``simplexderiv {approx,count,points,order,bounds}``.

Indices given on the command line (``--row``, ``--subset``) are 1-based, as in
the mathematical notation; the library itself is 0-based.

Human-readable tables print 6 significant digits. JSON and point/table CSV
files carry the shortest round-trip representation of every float, so a value
read back is bit-identical to the one written.

If ``SIMPLEXDERIV_OUTDIR`` is set, relative ``--out`` paths resolve against
it, and ``order`` writes its report there even without ``--out``.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from pathlib import Path

import numpy as np

from .directions import SCHEME_KINDS, DirectionError, SchemeSpec, closed_form_count
from .estimators import approximate, scheme_plan
from .harness import (
    REGISTRY,
    TestFunction,
    convergence_order,
    geometric_radii,
    get_function,
    sampling_radius,
    scheme_bounds,
    verify_bound,
)
from .sampling import EvalCache, MissingEvaluationError, NonFiniteValueError, point_key

OUTDIR_ENV = "SIMPLEXDERIV_OUTDIR"

EXIT_OK, EXIT_CHECK_FAILED, EXIT_USAGE = 0, 1, 2


class CliError(Exception):
    pass


# ---------------------------------------------------------------------------
# parsing helpers

def _floats(text: str | None) -> list[float] | None:
    if text is None:
        return None
    try:
        return [float(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise CliError(f"expected comma-separated numbers, got {text!r}") from None


def _ints(text: str | None) -> list[int] | None:
    if text is None:
        return None
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise CliError(f"expected comma-separated integers, got {text!r}") from None


def _fmt(x) -> str:
    return f"{float(x):.6g}"


def read_table(path: str | Path) -> tuple[int, EvalCache]:
    """Load a ``x1,...,xn,f`` CSV of externally computed function values."""
    path = Path(path)
    try:
        with path.open(newline="") as fh:
            rows = list(csv.reader(fh))
    except OSError as exc:
        raise CliError(f"cannot read table {path}: {exc}") from None
    if not rows:
        raise CliError(f"table {path} is empty")
    header = [h.strip() for h in rows[0]]
    n = len(header) - 1
    if n < 1 or header != [f"x{i + 1}" for i in range(n)] + ["f"]:
        raise CliError(f"table header must be x1,...,xn,f; got {','.join(header)}")
    X, values = [], []
    for lineno, row in enumerate(rows[1:], start=2):
        if not row or all(not c.strip() for c in row):
            continue
        if len(row) != n + 1:
            raise CliError(f"{path}:{lineno}: expected {n + 1} columns, got {len(row)}")
        try:
            nums = [float(c) for c in row]
        except ValueError:
            raise CliError(f"{path}:{lineno}: non-numeric entry") from None
        if not all(np.isfinite(nums)):
            raise CliError(f"{path}:{lineno}: non-finite entry")
        X.append(nums[:n])
        values.append(nums[n])
    if not X:
        raise CliError(f"table {path} has no data rows")
    return n, EvalCache.from_table(np.array(X), values)


def _is_table(target: str) -> bool:
    return target.endswith(".csv") or (target not in REGISTRY and Path(target).is_file())


def _spec(args, n: int | None = None) -> SchemeSpec:
    v = _floats(getattr(args, "v", None))
    n = n if n is not None else args.n
    if n is None and v is not None:
        n = len(v)
    x0 = _floats(getattr(args, "x0", None))
    if n is None and x0 is not None:
        n = len(x0)
    if n is None:
        raise CliError("cannot infer dimension; pass --n")
    row = getattr(args, "row", None)
    subset = _ints(getattr(args, "subset", None))
    for idx in ([row] if row is not None else []) + (subset or []):
        if not 1 <= idx <= n:
            raise CliError(f"index {idx} out of range 1..{n}")
    if v is not None and len(v) != n:
        raise CliError(f"--v has {len(v)} entries, expected {n}")
    return SchemeSpec(
        args.scheme, n, h=getattr(args, "h", None),
        row=None if row is None else row - 1,
        v=None if v is None else tuple(v),
        subset=None if subset is None else tuple(i - 1 for i in subset),
    )


def _x0(args, func: TestFunction | None, n: int) -> np.ndarray:
    x0 = _floats(args.x0)
    if x0 is None:
        x0 = list(func.x0) if func is not None and func.x0 is not None else [0.0] * n
    if len(x0) != n:
        raise CliError(f"--x0 has {len(x0)} entries, expected {n}")
    return np.array(x0, dtype=float)


def _out_path(args, default_name: str | None = None) -> Path | None:
    out = args.out
    outdir = os.environ.get(OUTDIR_ENV)
    if out is None:
        return None if (default_name is None or not outdir) else Path(outdir) / default_name
    out = Path(out)
    return Path(outdir) / out if outdir and not out.is_absolute() else out


def _write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text)
    print(f"wrote {path}", file=sys.stderr)


def _rows_csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
    writer.writeheader()
    for r in rows:
        writer.writerow({k: repr(v) if isinstance(v, float) else v for k, v in r.items()})
    return buf.getvalue()


def _emit(args, payload: dict, text: str, rows: list[dict] | None = None, default_name: str | None = None) -> None:
    """Print ``text`` (or JSON) and mirror the data to ``--out`` when requested."""
    as_json = json.dumps(payload, indent=2) + "\n"
    print(as_json if args.format == "json" else text, end="" if args.format == "json" else "\n")
    path = _out_path(args, default_name)
    if path is not None:
        fmt = args.format or ("json" if path.suffix == ".json" else "csv")
        _write(path, as_json if fmt == "json" or not rows else _rows_csv(rows))


def _matrix_text(A: np.ndarray) -> str:
    A = np.atleast_2d(A)
    return "\n".join("  " + "  ".join(f"{_fmt(x):>12}" for x in row) for row in A)


# ---------------------------------------------------------------------------
# commands

def cmd_approx(args) -> int:
    table = _is_table(args.target)
    func = None
    if table:
        n, cache = read_table(args.target)
        spec = _spec(args, n)
    else:
        known = REGISTRY.get(args.target)
        spec = _spec(args, args.n if args.n is not None or known is None else known.n)
        func = get_function(args.target)
        if spec.n != func.n:
            raise CliError(f"{func.name} is {func.n}-dimensional, got n={spec.n}")
        cache = EvalCache()
    x0 = _x0(args, func, spec.n)
    if table:
        plan = scheme_plan(spec, x0)
        have = {point_key(x) for x, _ in cache.items()}
        missing = [p for p in plan.points if point_key(p.coordinates) not in have]
        if missing:
            first = ", ".join(repr(float(c)) for c in missing[0].coordinates)
            raise CliError(f"table lacks {len(missing)} of {plan.count} plan points, e.g. ({first}); "
                           "generate them with the points command")
    res = approximate(spec, None if table else func, x0, cache)
    formula = closed_form_count(spec)
    bounds = {}
    if func is not None and func.polynomial is not None:
        rho = sampling_radius(spec, res.S, res.family)
        bounds = scheme_bounds(spec, res.S, res.family, func.lipschitz(x0, rho, 2), func.lipschitz(x0, rho, 3))
    value = np.asarray(res.value)
    payload = {
        "scheme": spec.kind,
        "function": args.target,
        "x0": x0.tolist(),
        "h": None if spec.kind.startswith("gcsh-example") else spec.step(x0),
        "output": spec.output,
        "value": value.tolist(),
        "evaluations": res.evaluations,
        "formula": None if formula is None else formula[0],
        "bounds": bounds,
    }
    fixed = spec.kind.startswith("gcsh-example")  # directions do not depend on h
    lines = [f"scheme {spec.kind} on {args.target} at x0 = ({', '.join(_fmt(x) for x in x0)})"
             + ("" if fixed else f", h = {_fmt(spec.step(x0))}")]
    lines.append(f"{spec.output}:")
    lines.append(_matrix_text(value))
    if value.ndim == 2 and spec.kind in ("diag", "gcsh-example1", "gcsh-example2"):
        lines.append("diagonal: (" + ", ".join(_fmt(x) for x in np.diag(value)) + ")")
    lines.append(f"distinct evaluations: {res.evaluations}" + (f"  [{formula[0]}]" if formula else ""))
    for name, b in bounds.items():
        lines.append(f"error bound ({name}): {_fmt(b)}")
    rows = [{"index": ",".join(str(i + 1) for i in idx), "value": float(x)} for idx, x in np.ndenumerate(value)]
    _emit(args, payload, "\n".join(lines), rows)
    return EXIT_OK


def cmd_count(args) -> int:
    args.scheme = args.scheme_pos or args.scheme
    if args.n is None:
        raise CliError("count needs --n")
    spec = _spec(args, args.n)
    if spec.kind.startswith("hvp") and args.v is None:
        raise CliError("hvp count needs --v")
    plan = scheme_plan(spec, np.zeros(spec.n) if args.x0 is None else _x0(args, None, spec.n))
    formula = closed_form_count(spec)
    ok = formula is None or formula[1] == plan.count
    note = None
    if spec.kind == "row-gcsh":
        full = spec.n * spec.n + spec.n + 1
        if full <= plan.count:
            note = f"full GCSH on a minimal poised set costs {full} here; prefer it"
    payload = {"scheme": spec.kind, "n": spec.n, "count": plan.count,
               "formula": None if formula is None else formula[0],
               "formula_value": None if formula is None else formula[1], "matches": ok, "note": note}
    text = f"{plan.count}"
    if formula is not None:
        text += f"  [{formula[0]}" + ("]" if ok else f" predicts {formula[1]}: MISMATCH]")
    if note:
        text += f"\nnote: {note}"
    _emit(args, payload, text, [payload])
    return EXIT_OK if ok else EXIT_CHECK_FAILED


def cmd_points(args) -> int:
    args.scheme = args.scheme_pos or args.scheme
    spec = _spec(args, args.n)
    if spec.kind.startswith("hvp") and args.v is None:
        raise CliError("hvp schemes need --v")
    x0 = _x0(args, None, spec.n)
    plan = scheme_plan(spec, x0)
    rows = []
    for p in plan.points:
        row = {f"x{i + 1}": float(c) for i, c in enumerate(p.coordinates)}
        row["provenance"] = " | ".join(p.provenance)
        rows.append(row)
    payload = {"scheme": spec.kind, "n": spec.n, "x0": x0.tolist(), "count": plan.count, "points": rows}
    if args.format == "json":
        _emit(args, payload, "")
    else:
        text = _rows_csv(rows).rstrip("\n")
        print(text)
        path = _out_path(args)
        if path is not None:
            _write(path, text + "\n")
    print(f"{plan.count} points", file=sys.stderr)
    return EXIT_OK


def _radii(args) -> list[float] | None:
    if args.radii is None:
        return None
    if ":" in args.radii:
        parts = args.radii.split(":")
        try:
            h0, ratio, count = float(parts[0]), float(parts[1]), int(parts[2])
        except (ValueError, IndexError):
            raise CliError(f"geometric radii take the form h0:ratio:count, got {args.radii!r}") from None
        return geometric_radii(h0, ratio, count)
    return _floats(args.radii)


def cmd_order(args) -> int:
    func = get_function(args.target)
    spec = _spec(args, func.n)
    x0 = _x0(args, func, func.n)
    report = convergence_order(spec, func, x0, _radii(args))
    ok = True
    verdict = ""
    if args.expect is not None:
        if report.exact:
            verdict = "exact (all errors at rounding level)"
        elif report.slope is None:
            ok, verdict = False, "too few points above rounding level to fit"
        else:
            ok = abs(report.slope - args.expect) <= args.tol
            verdict = f"expected {args.expect} +- {args.tol}: {'PASS' if ok else 'FAIL'}"
    lines = [f"{'h':>12} {'delta_u':>12} {'error':>12} {'evals':>6} fit"]
    for r in report.rows():
        lines.append(f"{_fmt(r['h']):>12} {_fmt(r['delta_u']):>12} {_fmt(r['error']):>12} "
                     f"{r['evaluations']:>6} {'yes' if r['used_in_fit'] else 'no'}")
    slope = "exact" if report.exact else ("n/a" if report.slope is None else _fmt(report.slope))
    lines.append(f"fitted order: {slope}" + (f"  ({verdict})" if verdict else ""))
    payload = json.loads(report.to_json())
    payload["passed"] = ok
    name = f"order_{func.name}_{spec.kind}.{args.format or 'csv'}"
    _emit(args, payload, "\n".join(lines), report.rows(), default_name=name)
    return EXIT_OK if ok else EXIT_CHECK_FAILED


def cmd_bounds(args) -> int:
    func = get_function(args.target)
    spec = _spec(args, func.n)
    x0 = _x0(args, func, func.n)
    checks = verify_bound(spec, func, x0, _radii(args))
    rows = [{"h": c.h, "bound": c.bound_name, "measured": c.measured, "rhs": c.bound, "passed": c.passed}
            for c in checks]
    ok = all(c.passed for c in checks)
    lines = [f"{'h':>12} {'bound':>14} {'measured':>12} {'rhs':>12} ok"]
    for c in checks:
        lines.append(f"{_fmt(c.h):>12} {c.bound_name:>14} {_fmt(c.measured):>12} {_fmt(c.bound):>12} "
                     f"{'yes' if c.passed else 'NO'}")
    lines.append("all bounds hold" if ok else "BOUND VIOLATED")
    _emit(args, {"scheme": spec.kind, "function": func.name, "x0": x0.tolist(), "checks": rows, "passed": ok},
          "\n".join(lines), rows)
    return EXIT_OK if ok else EXIT_CHECK_FAILED


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    schemes = ", ".join(SCHEME_KINDS[:-1])
    parser = argparse.ArgumentParser(prog="simplexderiv", description="Derivative estimates from function values.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, scheme_positional=False):
        if scheme_positional:
            p.add_argument("scheme_pos", nargs="?", metavar="SCHEME", help=f"one of: {schemes}")
        p.add_argument("--scheme", default="gcsh-minimal", help=f"one of: {schemes}")
        p.add_argument("--n", type=int, help="dimension")
        p.add_argument("--x0", help="base point, comma separated")
        p.add_argument("--h", type=float, help="step radius (default 1e-3 * max(1, |x0|))")
        p.add_argument("--v", help="direction for hvp schemes, comma separated")
        p.add_argument("--row", "--i", dest="row", type=int, help="row index for row schemes (1-based)")
        p.add_argument("--subset", help="diagonal indices for diag/cshd (1-based, comma separated)")
        p.add_argument("--out", help=f"output file (relative paths resolve against ${OUTDIR_ENV})")
        p.add_argument("--format", choices=("csv", "json"), help="json prints JSON; file format for --out")

    p = sub.add_parser("approx", help="estimate a derivative")
    p.add_argument("target", help=f"registered function ({', '.join(REGISTRY)}) or x1..xn,f CSV table")
    common(p)
    p.set_defaults(func=cmd_approx)

    p = sub.add_parser("count", help="distinct evaluations a scheme needs")
    common(p, scheme_positional=True)
    p.set_defaults(func=cmd_count)

    p = sub.add_parser("points", help="the deduplicated sample plan")
    common(p, scheme_positional=True)
    p.set_defaults(func=cmd_points)

    for name, fn, helptext in (("order", cmd_order, "empirical convergence order over a radius sweep"),
                               ("bounds", cmd_bounds, "check measured errors against the error bounds")):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("target", help="registered function")
        common(p)
        p.add_argument("--radii", help="comma-separated radii, or h0:ratio:count for a geometric sweep")
        if name == "order":
            p.add_argument("--expect", type=float, help="expected slope")
            p.add_argument("--tol", type=float, default=0.15, help="allowed deviation from --expect")
        p.set_defaults(func=fn)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (CliError, DirectionError, KeyError, MissingEvaluationError, NonFiniteValueError, ValueError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"error: {msg}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
