"""Test functions with exact derivatives, radius sweeps and bound checks."""
from __future__ import annotations

import csv
import io
import itertools
import json
import math
from dataclasses import asdict, dataclass, field, replace
from typing import Callable, Mapping

import numpy as np

from . import bounds as B
from .directions import DirectionFamily, DirectionMatrix, SchemeSpec
from .estimators import approximate
from .linalg import spectral_norm
from .projections import proj_st, proj_vec
from .sampling import EvalCache

EPS = np.finfo(float).eps


class PolynomialFunction:
    """``sum_alpha c_alpha x^alpha`` with exact derivatives of any order.

    >>> p = PolynomialFunction(2, {(1, 1): 1.0})
    >>> p.tensor([3.0, 4.0], 2)
    array([[0., 1.],
           [1., 0.]])
    """

    def __init__(self, n: int, terms: Mapping[tuple[int, ...], float]):
        self.n = int(n)
        self.terms: dict[tuple[int, ...], float] = {}
        for alpha, c in terms.items():
            alpha = tuple(int(a) for a in alpha)
            if len(alpha) != self.n or min(alpha) < 0:
                raise ValueError(f"bad multi-index {alpha} for n={self.n}")
            if c != 0:
                self.terms[alpha] = self.terms.get(alpha, 0.0) + float(c)

    @property
    def degree(self) -> int:
        return max((sum(a) for a in self.terms), default=0)

    def __call__(self, x) -> float:
        x = np.asarray(x, dtype=float)
        return float(sum(c * np.prod(x ** np.array(a)) for a, c in self.terms.items()))

    def partial(self, x, counts: tuple[int, ...]) -> float:
        """Mixed partial derivative; ``counts[k]`` is how often ``x_k`` is differentiated."""
        x = np.asarray(x, dtype=float)
        total = 0.0
        for alpha, c in self.terms.items():
            if any(a < b for a, b in zip(alpha, counts)):
                continue
            coef = c
            mono = 1.0
            for a, b, xk in zip(alpha, counts, x):
                coef *= math.factorial(a) // math.factorial(a - b)
                mono *= xk ** (a - b)
            total += coef * mono
        return total

    def tensor(self, x, order: int) -> np.ndarray:
        if order < 1:
            raise ValueError("order must be >= 1")
        out = np.zeros((self.n,) * order)
        for idx in itertools.combinations_with_replacement(range(self.n), order):
            counts = tuple(idx.count(k) for k in range(self.n))
            value = self.partial(x, counts)
            for perm in set(itertools.permutations(idx)):
                out[perm] = value
        return out

    def gradient(self, x) -> np.ndarray:
        return self.tensor(x, 1)

    def hessian(self, x) -> np.ndarray:
        return self.tensor(x, 2)

    def lipschitz(self, x0, radius: float, order: int) -> float:
        """Upper bound on the Lipschitz constant of the ``order``-th derivative on the closed ball.

        Uses the exact Taylor expansion about ``x0`` with Frobenius norms, which
        dominate the induced multilinear norms.
        """
        total = 0.0
        for r in range(0, max(self.degree - order, 0) + 1):
            q = order + 1 + r
            if q > self.degree:
                break
            total += np.linalg.norm(self.tensor(x0, q).ravel()) * radius**r / math.factorial(r)
        return float(total)


def analytic_tensor(p: PolynomialFunction, x0, order: int) -> np.ndarray:
    return p.tensor(x0, order)


def random_polynomial(rng: np.random.Generator, n: int, degree: int, scale: float = 1.0) -> PolynomialFunction:
    """Dense random polynomial of total degree at most ``degree``."""
    terms = {}
    for alpha in itertools.product(range(degree + 1), repeat=n):
        if sum(alpha) <= degree:
            terms[alpha] = scale * rng.uniform(-1.0, 1.0)
    return PolynomialFunction(n, terms)


@dataclass(frozen=True)
class TestFunction:
    name: str
    n: int
    f: Callable[[np.ndarray], float]
    hessian: Callable[[np.ndarray], np.ndarray]
    polynomial: PolynomialFunction | None = None
    x0: tuple[float, ...] | None = None  # default evaluation point

    __test__ = False  # not a pytest class

    def __call__(self, x) -> float:
        return self.f(np.asarray(x, dtype=float))

    def lipschitz(self, x0, radius: float, order: int) -> float | None:
        return None if self.polynomial is None else self.polynomial.lipschitz(x0, radius, order)


def from_polynomial(name: str, p: PolynomialFunction, x0=None) -> TestFunction:
    return TestFunction(name, p.n, p, p.hessian, p, None if x0 is None else tuple(x0))


def _expsin_hessian(x):
    x = np.asarray(x, dtype=float)
    H = np.zeros((3, 3))
    H[0, 0] = math.exp(x[0])
    H[1, 1] = -math.sin(x[1]) + 2 * x[0]
    H[0, 1] = H[1, 0] = 2 * x[1]
    return H


REGISTRY: dict[str, TestFunction] = {
    "quartic3": from_polynomial(
        "quartic3", PolynomialFunction(3, {(4, 0, 0): -2.0, (0, 4, 0): 1.0, (0, 0, 4): 10.0}), (2.0, -2.0, 5.0)
    ),
    "expsin3": TestFunction(
        "expsin3", 3,
        lambda x: math.exp(x[0]) + math.sin(x[1]) + x[0] * x[1] ** 2,
        _expsin_hessian,
        x0=(0.3, 0.6, 0.1),
    ),
    "rosenbrock2": from_polynomial(
        "rosenbrock2",
        PolynomialFunction(2, {(0, 0): 1.0, (1, 0): -2.0, (2, 0): 1.0, (4, 0): 100.0, (2, 1): -200.0, (0, 2): 100.0}),
        (-1.2, 1.0),
    ),
    "bilinear2": from_polynomial("bilinear2", PolynomialFunction(2, {(1, 1): 1.0})),
    "cube1": from_polynomial("cube1", PolynomialFunction(1, {(3,): 1.0})),
    "quartic1": from_polynomial("quartic1", PolynomialFunction(1, {(4,): 1.0})),
    "mixed4": from_polynomial(
        "mixed4",
        PolynomialFunction(4, {(4, 0, 0, 0): 0.5, (1, 2, 0, 0): -1.5, (0, 1, 1, 1): 2.0, (0, 0, 3, 1): 0.75,
                               (0, 0, 0, 2): 1.0, (2, 0, 0, 2): -0.25}),
        (0.5, -1.0, 0.3, 1.2),
    ),
}


def get_function(name: str) -> TestFunction:
    try:
        return REGISTRY[name]
    except KeyError:
        raise KeyError(f"unknown function {name!r}; known: {', '.join(sorted(REGISTRY))}") from None


# ---------------------------------------------------------------------------
# targets, errors and bounds per scheme

def scheme_target(spec: SchemeSpec, S: DirectionMatrix, F: DirectionFamily | None, H: np.ndarray) -> np.ndarray:
    """The part of the true Hessian (or Hessian-vector product) a scheme can see."""
    if spec.kind.startswith("hvp"):
        return proj_vec(H @ np.asarray(spec.v), S)
    if spec.kind == "cshd":
        return np.diag(proj_st(H, S, [-DirectionMatrix(c) for c in S.columns]))
    return proj_st(H, S, F)


def error_norm(x) -> float:
    """Spectral norm for matrices, Euclidean for vectors, mode-1 unfolding for tensors."""
    x = np.asarray(x, dtype=float)
    if x.ndim == 1:
        return float(np.linalg.norm(x))
    if x.ndim == 2:
        return spectral_norm(x)
    return spectral_norm(x.reshape(x.shape[0], -1))


def sampling_radius(spec: SchemeSpec, S: DirectionMatrix, F: DirectionFamily | None) -> float:
    """Radius of a closed ball about ``x0`` covering every segment the error analysis uses."""
    if F is None:
        return S.radius
    return S.radius + max(T.radius for T in F)


def scheme_bounds(spec: SchemeSpec, S: DirectionMatrix, F: DirectionFamily | None,
                  lip2: float, lip3: float) -> dict[str, float]:
    """Applicable bound right-hand sides, keyed by bound name."""
    if spec.kind == "cshd":
        return {"diag": B.diag_bound(lip3, S.radius)}
    b = B.BoundInputs.from_directions(S, F, lip2=lip2, lip3=lip3, v=spec.v)
    kind = spec.kind
    if kind == "gsh-minimal":
        return {"gsh_common_T": B.gsh_bound(b, "common_T")}
    if kind == "gcsh-minimal":
        return {"gcsh_common_T": B.gcsh_bound(b, "common_T")}
    if kind == "diag":
        return {"gcsh_general": B.gcsh_bound(b, "general"), "diag": B.diag_bound(lip3, S.radius)}
    if kind in ("offdiag", "offdiag-gcsh"):
        return {"offdiag": B.offdiag_bound(b, centered=spec.centered)}
    if kind in ("row", "row-gcsh"):
        return {"row": B.row_bound(b, centered=spec.centered)}
    if kind.startswith("hvp"):
        return {"hvp": B.hvp_bound(b, centered=spec.centered)}
    out = {}
    bound = B.gcsh_bound if spec.centered else B.gsh_bound
    if S.full_column_rank or all(T.full_row_rank for T in F):
        out["general"] = bound(b, "general")
    if F.common_matrix is not None:
        out["common_T"] = bound(b, "common_T")
    return out


@dataclass
class SweepReport:
    scheme: str
    function: str
    x0: list[float]
    radii: list[float]
    delta_u: list[float]
    errors: list[float]
    evaluations: list[int]
    bounds: list[dict[str, float]] = field(default_factory=list)
    used: list[bool] = field(default_factory=list)
    slope: float | None = None
    exact: bool = False

    def rows(self) -> list[dict]:
        out = []
        for i, h in enumerate(self.radii):
            row = {"h": h, "delta_u": self.delta_u[i], "error": self.errors[i],
                   "evaluations": self.evaluations[i], "used_in_fit": self.used[i] if self.used else True}
            if self.bounds:
                row.update({f"bound_{k}": v for k, v in self.bounds[i].items()})
            out.append(row)
        return out

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2)

    def to_csv(self) -> str:
        rows = self.rows()
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
        writer.writeheader()
        for r in rows:
            writer.writerow({k: repr(v) if isinstance(v, float) else v for k, v in r.items()})
        return buf.getvalue()


def geometric_radii(h0: float = 1e-1, ratio: float = 0.5, count: int = 8) -> list[float]:
    return [h0 * ratio**k for k in range(count)]


def fit_slope(delta_u, errors) -> float:
    x = np.log(np.asarray(delta_u, dtype=float))
    y = np.log(np.asarray(errors, dtype=float))
    return float(np.polyfit(x, y, 1)[0])


def _run(spec: SchemeSpec, func: TestFunction, x0: np.ndarray, h: float):
    s = replace(spec, h=h)
    cache = EvalCache()
    res = approximate(s, func, x0, cache)
    target = scheme_target(s, res.S, res.family, func.hessian(x0))
    diff = res.value - target
    # CSHD is a diagonal matrix in vector form: spectral norm = max |entry|
    err = float(np.max(np.abs(diff))) if s.kind == "cshd" else error_norm(diff)
    fmax = max(abs(v) for _, v in cache.items())
    return s, res, err, fmax


def _delta_l(res) -> float:
    F = res.family
    return min([res.S.radius] + ([] if F is None else [T.radius for T in F]))


def convergence_order(spec: SchemeSpec, func: TestFunction | str, x0, radii=None) -> SweepReport:
    """Measure errors over shrinking radii and fit the empirical order.

    All radii of a scheme scale with ``h``, so ``Delta_u / Delta_l`` stays
    fixed along the sweep. Points whose error sits at the floating-point floor
    (``1e3 * eps * max|f| / Delta_l**2``) are left out of the fit; when every
    point is at the floor the estimate is reported as exact.
    """
    func = get_function(func) if isinstance(func, str) else func
    x0 = np.asarray(x0, dtype=float)
    radii = geometric_radii() if radii is None else [float(h) for h in radii]
    if len(radii) < 4:
        raise ValueError("need at least 4 radii")
    if any(b >= a for a, b in zip(radii, radii[1:])):
        raise ValueError("radii must be strictly decreasing")
    report = SweepReport(spec.kind, func.name, x0.tolist(), [], [], [], [])
    for h in radii:
        s, res, err, fmax = _run(spec, func, x0, h)
        F = res.family
        d_u = max([res.S.radius] + ([] if F is None else [T.radius for T in F]))
        d_l = _delta_l(res)
        floor = 1e3 * EPS * max(1.0, fmax) / d_l**2
        report.radii.append(h)
        report.delta_u.append(d_u)
        report.errors.append(err)
        report.evaluations.append(res.evaluations)
        report.used.append(bool(err >= floor))
        if func.polynomial is not None:
            rho = sampling_radius(s, res.S, F)
            report.bounds.append(scheme_bounds(s, res.S, F, func.lipschitz(x0, rho, 2), func.lipschitz(x0, rho, 3)))
    used = [i for i, u in enumerate(report.used) if u]
    if not used:
        report.exact = True
    elif len(used) >= 2:
        report.slope = fit_slope([report.delta_u[i] for i in used], [report.errors[i] for i in used])
    return report


@dataclass(frozen=True)
class BoundCheck:
    h: float
    bound_name: str
    measured: float
    bound: float
    passed: bool


def verify_bound(spec: SchemeSpec, p: PolynomialFunction | TestFunction | str, x0, radii=None,
                 slack: float = 1e-8) -> list[BoundCheck]:
    """Compare the measured projected error with every applicable bound.

    A check passes when ``measured <= bound + slack + 100 * eps * max|f| / Delta_l**2``.
    ``slack`` is an absolute allowance for a zero bound (e.g. a forward scheme
    on a quadratic); the second term covers rounding in the difference
    quotients, which matters where a bound is attained with equality.
    """
    if isinstance(p, str):
        p = get_function(p)
    func = p if isinstance(p, TestFunction) else from_polynomial("polynomial", p)
    if func.polynomial is None:
        raise ValueError("bound verification needs a polynomial with known Lipschitz constants")
    x0 = np.asarray(x0, dtype=float)
    radii = [1e-1 * 2.0**-k for k in range(7)] if radii is None else list(radii)
    checks = []
    for h in radii:
        s, res, err, fmax = _run(spec, func, x0, h)
        rho = sampling_radius(s, res.S, res.family)
        found = scheme_bounds(s, res.S, res.family, func.lipschitz(x0, rho, 2), func.lipschitz(x0, rho, 3))
        allowance = slack + 100 * EPS * max(1.0, fmax) / _delta_l(res) ** 2
        for name, value in found.items():
            checks.append(BoundCheck(h, name, err, value, bool(err <= value + allowance)))
    return checks
