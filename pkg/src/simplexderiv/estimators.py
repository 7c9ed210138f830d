"""Simplex-type derivative estimates built only from function values.

Each public estimator accepts either a callable ``f`` (points are enumerated
and evaluated into ``cache``) or ``f=None`` with a cache that already holds
every required value, e.g. one replayed from an offline evaluation table.
Estimators never evaluate a point outside the plan reported by
:func:`simplexderiv.sampling.enumerate_plan`.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .directions import (
    DirectionFamily,
    DirectionMatrix,
    SchemeSpec,
    as_direction,
    as_family,
    build_hvp,
    default_step,
)
from .linalg import hadamard, pinv
from .sampling import (
    Combo,
    EvalCache,
    SamplePlan,
    Stencil,
    combine,
    enumerate_plan,
    enumerate_tensor_plan,
    evaluate,
    negate,
    tensor_atoms,
)

Objective = Callable[[np.ndarray], float]

MAX_TENSOR_ORDER = 4


class UnsupportedConfigurationError(ValueError):
    pass


# ---------------------------------------------------------------------------
# tensor helpers

def tensor_mul(A, M) -> np.ndarray:
    """Multiply ``A`` into the first axis of ``M``, layer by layer.

    For an order-3 ``M`` with layers ``L_k = M[:, :, k]`` the result has
    layers ``A @ L_k``. Orders 1 and 2 reduce to ordinary products.
    """
    A = np.asarray(A, dtype=float)
    M = np.asarray(M, dtype=float)
    if A.ndim != 2 or M.ndim < 1 or A.shape[1] != M.shape[0]:
        raise ValueError(f"cannot multiply {A.shape} into tensor of shape {M.shape}")
    return np.tensordot(A, M, axes=(1, 0))


def tensor_transpose(M) -> np.ndarray:
    """Full index reversal: ``T[i, j1, .., jq] = M[jq, .., j1, i]``."""
    return np.transpose(np.asarray(M))


def floors(M) -> list[np.ndarray]:
    return [np.asarray(M)[i] for i in range(np.shape(M)[0])]


def layers(M) -> list[np.ndarray]:
    M = np.asarray(M)
    return [M[..., k] for k in range(M.shape[-1])]


def from_floors(Fs: Sequence) -> np.ndarray:
    return np.stack([np.asarray(F) for F in Fs], axis=0)


def from_layers(Ls: Sequence) -> np.ndarray:
    return np.stack([np.asarray(L) for L in Ls], axis=-1)


# ---------------------------------------------------------------------------
# stencil-level kernels (no evaluation, read only)

def _delta(st: Stencil, base: Combo, S_c: list[Combo]) -> np.ndarray:
    f0 = st.value(base)
    return np.array([st.value(combine(base, c)) - f0 for c in S_c])


def _gsg(st: Stencil, base: Combo, S: DirectionMatrix, S_c: list[Combo]) -> np.ndarray:
    return tensor_mul(S.pinv_t, _delta(st, base, S_c))


def _gsh(st: Stencil, base: Combo, S: DirectionMatrix, S_c, family, fam_c) -> np.ndarray:
    rows = [
        _gsg(st, combine(base, s), T, T_c) - _gsg(st, base, T, T_c)
        for s, T, T_c in zip(S_c, family, fam_c)
    ]
    return tensor_mul(S.pinv_t, from_floors(rows))


def _tensor(st: Stencil, base: Combo, mats: list[DirectionMatrix], combos: list[list[Combo]]) -> np.ndarray:
    if len(mats) == 1:
        return _gsg(st, base, mats[0], combos[0])
    here = _tensor(st, base, mats[1:], combos[1:])
    rows = [
        tensor_transpose(_tensor(st, combine(base, s), mats[1:], combos[1:]) - here)
        for s in combos[0]
    ]
    return tensor_mul(mats[0].pinv_t, from_floors(rows))


def _prepare(f: Objective | None, plan: SamplePlan, cache: EvalCache | None, workers=None) -> Stencil:
    cache = EvalCache() if cache is None else cache
    if f is not None:
        evaluate(f, plan, cache, workers=workers)
    return Stencil(plan.x0, plan.atoms, cache)


def _x0(x0) -> np.ndarray:
    x0 = np.asarray(x0, dtype=float).reshape(-1)
    if not np.all(np.isfinite(x0)):
        raise ValueError("x0 must be finite")
    return x0


# ---------------------------------------------------------------------------
# public estimators

def delta_s(f: Objective | None, x0, S, cache: EvalCache | None = None) -> np.ndarray:
    """Forward differences ``f(x0 + s^j) - f(x0)`` for each column of ``S``."""
    S = as_direction(S)
    plan = enumerate_plan(_x0(x0), S, scheme="gsg")
    st = _prepare(f, plan, cache)
    return _delta(st, (), st.atoms.combos(S))


def gsg(f: Objective | None, x0, S, cache: EvalCache | None = None) -> np.ndarray:
    """Generalized simplex gradient ``(S^T)^+ delta_s f(x0; S)``."""
    S = as_direction(S)
    plan = enumerate_plan(_x0(x0), S, scheme="gsg")
    st = _prepare(f, plan, cache)
    return _gsg(st, (), S, st.atoms.combos(S))


def gsh(f: Objective | None, x0, S, T, cache: EvalCache | None = None, *, workers=None) -> np.ndarray:
    """Generalized simplex Hessian.

    Row ``j`` of the difference matrix is the change in the simplex gradient
    over ``T_j`` when the base point moves from ``x0`` to ``x0 + s^j``; the
    result is ``(S^T)^+`` times that matrix. ``T`` may be a single matrix
    (shared by every column of ``S``), a sequence of matrices or a
    :class:`DirectionFamily`. No symmetrization is applied.
    """
    S = as_direction(S)
    family = as_family(T, S.m)
    plan = enumerate_plan(_x0(x0), S, family, scheme="gsh")
    st = _prepare(f, plan, cache, workers)
    return _gsh(st, (), S, st.atoms.combos(S), family, [st.atoms.combos(Tj) for Tj in family])


def gcsh(f: Objective | None, x0, S, T, cache: EvalCache | None = None, *, workers=None) -> np.ndarray:
    """Generalized centered simplex Hessian: mean of the GSH over ``(S, T)`` and ``(-S, -T)``."""
    S = as_direction(S)
    family = as_family(T, S.m)
    plan = enumerate_plan(_x0(x0), S, family, centered=True, scheme="gcsh")
    st = _prepare(f, plan, cache, workers)
    S_c = st.atoms.combos(S)
    fam_c = [st.atoms.combos(Tj) for Tj in family]
    plus = _gsh(st, (), S, S_c, family, fam_c)
    minus = _gsh(st, (), -S, [negate(c) for c in S_c], -family, [[negate(t) for t in T_c] for T_c in fam_c])
    return 0.5 * (plus + minus)


def cshd(f: Objective | None, x0, S, cache: EvalCache | None = None) -> np.ndarray:
    """Centered simplex Hessian diagonal ``(W^T)^+ eps``.

    ``W`` has columns ``s^j * s^j`` (entrywise) and
    ``eps_j = f(x0 + s^j) + f(x0 - s^j) - 2 f(x0)``.
    """
    S = as_direction(S)
    plan = enumerate_plan(_x0(x0), S, centered=True, scheme="cshd")
    st = _prepare(f, plan, cache)
    f0 = st.value(())
    eps = np.array([st.value(c) + st.value(negate(c)) - 2.0 * f0 for c in st.atoms.combos(S)])
    W = hadamard(S.matrix, S.matrix)
    return pinv(W).T @ eps


def hvp(f: Objective | None, x0, v, h: float | None = None, centered: bool = False,
        cache: EvalCache | None = None) -> np.ndarray:
    """Hessian-vector product estimate using inner direction ``h v``.

    The outer matrix is square and nonsingular with ``-h v`` as one column, so
    the GSH variant costs ``2n+1`` evaluations and the centered one ``4n-1``.
    """
    x0 = _x0(x0)
    v = np.asarray(v, dtype=float).reshape(-1)
    h = default_step(x0) if h is None else h
    S, F = build_hvp(x0.size, v, h, centered=centered)
    H = (gcsh if centered else gsh)(f, x0, S, F, cache)
    return H @ v


def simplex_derivative_tensor(f: Objective | None, x0, S1, inner: Sequence = (), cache: EvalCache | None = None,
                              *, max_order: int = MAX_TENSOR_ORDER) -> np.ndarray:
    """Order-P simplex derivative tensor, ``P = 1 + len(inner)``.

    The recursion is: at ``P = 1`` the simplex gradient over ``S1``;
    otherwise ``(S1^T)^+`` multiplied into the stack of transposed differences
    of the order-(P-1) estimates at ``x0 + s^j`` and ``x0``. Every inner level
    uses a single shared matrix.
    """
    order = 1 + len(inner)
    if order > max_order:
        raise UnsupportedConfigurationError(f"order {order} exceeds the configured maximum {max_order}")
    mats = [as_direction(S1)]
    for M in inner:
        if isinstance(M, DirectionFamily):
            if M.common_matrix is None:
                raise UnsupportedConfigurationError("order >= 3 needs one shared matrix per level")
            M = M.common_matrix
        elif isinstance(M, (list, tuple)) and M and not np.isscalar(M[0]) and np.ndim(M[0]) == 2:
            raise UnsupportedConfigurationError("order >= 3 needs one shared matrix per level")
        mats.append(as_direction(M))
    plan = enumerate_tensor_plan(_x0(x0), mats, scheme=f"order-{order}")
    st = _prepare(f, plan, cache)
    atoms = tensor_atoms(mats)
    return _tensor(st, (), mats, [atoms.combos(M) for M in mats])


def gst(f: Objective | None, x0, S, T, U, cache: EvalCache | None = None) -> np.ndarray:
    """Generalized simplex Tressian over ``S``, shared ``T`` and shared ``U``."""
    return simplex_derivative_tensor(f, x0, S, [T, U], cache)


# ---------------------------------------------------------------------------
# scheme-level entry point

@dataclass(frozen=True, eq=False)
class EstimatorResult:
    value: np.ndarray
    plan: SamplePlan
    S: DirectionMatrix
    family: DirectionFamily | None

    @property
    def evaluations(self) -> int:
        return self.plan.count


def scheme_plan(spec: SchemeSpec, x0) -> SamplePlan:
    x0 = _x0(x0)
    S, F = spec.directions(x0)
    return enumerate_plan(x0, S, F, centered=spec.centered, scheme=spec.kind)


def approximate(spec: SchemeSpec, f: Objective | None, x0, cache: EvalCache | None = None,
                *, workers=None) -> EstimatorResult:
    """Run the estimator a :class:`SchemeSpec` describes."""
    x0 = _x0(x0)
    if x0.size != spec.n:
        raise ValueError(f"x0 has length {x0.size}, scheme expects n={spec.n}")
    S, F = spec.directions(x0)
    cache = EvalCache() if cache is None else cache
    plan = enumerate_plan(x0, S, F, centered=spec.centered, scheme=spec.kind)
    if f is not None:
        evaluate(f, plan, cache, workers=workers)
    if spec.kind == "cshd":
        value = cshd(None, x0, S, cache)
    elif spec.kind.startswith("hvp"):
        value = (gcsh if spec.centered else gsh)(None, x0, S, F, cache) @ np.asarray(spec.v)
    else:
        value = (gcsh if spec.centered else gsh)(None, x0, S, F, cache)
    return EstimatorResult(value, plan, S, F)
