"""Matrices of directions and the builders for each approximation scheme.

A scheme is determined by an outer matrix ``S`` (``n x m``) and a family of
inner matrices ``T_1, ..., T_m``. The builders here return ``(S, family)``
pairs with the evaluation-point reuse the counts rely on.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

import numpy as np

from .linalg import matrix_rank, partial_diagonal_info, pinv, spectral_norm


class DirectionError(ValueError):
    pass


class DirectionMatrix:
    """An ``n x m`` matrix whose columns are sampling directions."""

    def __init__(self, matrix):
        A = np.array(matrix, dtype=float)
        if A.ndim == 1:
            A = A[:, None]
        if A.ndim != 2 or A.size == 0:
            raise DirectionError(f"directions must be a non-empty n x m matrix, got shape {A.shape}")
        if not np.all(np.isfinite(A)):
            raise DirectionError("directions contain non-finite entries")
        if not np.any(A != 0.0):
            raise DirectionError("directions must have non-null rank")
        A.setflags(write=False)
        self.matrix = A

    @property
    def n(self) -> int:
        return self.matrix.shape[0]

    @property
    def m(self) -> int:
        return self.matrix.shape[1]

    @property
    def columns(self) -> list[np.ndarray]:
        return [self.matrix[:, j] for j in range(self.m)]

    @cached_property
    def radius(self) -> float:
        return float(np.max(np.linalg.norm(self.matrix, axis=0)))

    @cached_property
    def pinv(self) -> np.ndarray:
        return pinv(self.matrix)

    @property
    def pinv_t(self) -> np.ndarray:
        """``(S^T)^+``, taken as the transpose of ``S^+``."""
        return self.pinv.T

    @property
    def normalized(self) -> np.ndarray:
        return self.matrix / self.radius

    @cached_property
    def rank(self) -> int:
        return matrix_rank(self.matrix)

    @property
    def full_column_rank(self) -> bool:
        return self.rank == self.m

    @property
    def full_row_rank(self) -> bool:
        return self.rank == self.n

    def normalized_pinv_norm(self) -> float:
        """``||(S/Delta_S)^+||``; equal to ``||((S/Delta_S)^T)^+||``."""
        return self.radius * spectral_norm(self.pinv)

    def __neg__(self) -> "DirectionMatrix":
        # Negation keeps pinv bit-exact so centered estimates are symmetric.
        out = DirectionMatrix(-self.matrix)
        out.__dict__["pinv"] = -self.pinv
        return out

    def __eq__(self, other) -> bool:
        return isinstance(other, DirectionMatrix) and np.array_equal(self.matrix, other.matrix)

    def __hash__(self):
        return hash((self.matrix.shape, self.matrix.tobytes()))

    def __repr__(self) -> str:
        return f"DirectionMatrix({self.matrix.tolist()!r})"


@dataclass(frozen=True, eq=False)
class DirectionFamily:
    """The inner matrices ``T_1..T_m`` paired with the columns of ``S``."""

    members: tuple[DirectionMatrix, ...]
    all_equal: bool = False

    def __post_init__(self):
        if not self.members:
            raise DirectionError("direction family must be non-empty")
        n = self.members[0].n
        if any(T.n != n for T in self.members):
            raise DirectionError("all inner matrices must have the same number of rows")
        if self.all_equal and any(T is not self.members[0] for T in self.members):
            raise DirectionError("all_equal family must share a single matrix")

    @classmethod
    def common(cls, T, m: int) -> "DirectionFamily":
        T = T if isinstance(T, DirectionMatrix) else DirectionMatrix(T)
        return cls((T,) * m, all_equal=True)

    @classmethod
    def of(cls, matrices: Sequence) -> "DirectionFamily":
        mats = tuple(T if isinstance(T, DirectionMatrix) else DirectionMatrix(T) for T in matrices)
        return cls(mats, all_equal=False)

    @property
    def m(self) -> int:
        return len(self.members)

    @property
    def common_matrix(self) -> DirectionMatrix | None:
        if self.all_equal:
            return self.members[0]
        first = self.members[0]
        if all(T == first for T in self.members):
            return first
        return None

    def __getitem__(self, j: int) -> DirectionMatrix:
        return self.members[j]

    def __iter__(self):
        return iter(self.members)

    def __len__(self) -> int:
        return len(self.members)

    def __neg__(self) -> "DirectionFamily":
        if self.all_equal:
            return DirectionFamily.common(-self.members[0], self.m)
        return DirectionFamily(tuple(-T for T in self.members))


def as_direction(S) -> DirectionMatrix:
    return S if isinstance(S, DirectionMatrix) else DirectionMatrix(S)


def as_family(F, m: int) -> DirectionFamily:
    if isinstance(F, DirectionFamily):
        family = F
    elif isinstance(F, (DirectionMatrix, np.ndarray)):
        family = DirectionFamily.common(F, m)
    else:
        family = DirectionFamily.of(F)
    if family.m != m:
        raise DirectionError(f"family has {family.m} members but S has {m} columns")
    return family


@dataclass(frozen=True)
class Radii:
    delta_s: float
    delta_t: float
    delta_u: float
    delta_l: float
    k: int
    t_hat_index: int  # member whose normalized pseudoinverse has the largest norm
    t_hat_pinv_norm: float
    s_hat_pinv_norm: float


def radii(S, F) -> Radii:
    S = as_direction(S)
    family = as_family(F, S.m)
    t_radii = [T.radius for T in family]
    norms = [T.normalized_pinv_norm() for T in family]
    j_hat = int(np.argmax(norms))
    all_radii = [S.radius, *t_radii]
    return Radii(
        delta_s=S.radius,
        delta_t=max(t_radii),
        delta_u=max(all_radii),
        delta_l=min(all_radii),
        k=max(T.m for T in family),
        t_hat_index=j_hat,
        t_hat_pinv_norm=norms[j_hat],
        s_hat_pinv_norm=S.normalized_pinv_norm(),
    )


def default_step(x0) -> float:
    return 1e-3 * max(1.0, float(np.linalg.norm(np.asarray(x0, dtype=float))))


def _check_h(h: float) -> float:
    h = float(h)
    if h == 0.0 or not np.isfinite(h):
        raise DirectionError("step h must be finite and nonzero")
    return h


def _check_n(n: int, minimum: int = 1) -> int:
    if int(n) != n or n < minimum:
        raise DirectionError(f"dimension n must be an integer >= {minimum}, got {n}")
    return int(n)


def _basis(n: int, idx, h: float) -> np.ndarray:
    M = np.zeros((n, len(idx)))
    for col, i in enumerate(idx):
        M[i, col] = h
    return M


def build_full_gsh_minimal(n: int, h: float) -> tuple[DirectionMatrix, DirectionFamily]:
    """``S = h Id`` with ``T = S`` for every column.

    Both are full rank, so the estimate targets the whole Hessian, and the
    points ``x0 + h e^i + h e^j`` coincide for swapped ``(i, j)``, leaving
    ``(n+1)(n+2)/2`` distinct evaluations.
    """
    n, h = _check_n(n), _check_h(h)
    S = DirectionMatrix(_basis(n, range(n), h))
    return S, DirectionFamily.common(S, n)


def build_full_gcsh_minimal(n: int, h: float) -> tuple[DirectionMatrix, DirectionFamily]:
    n, h = _check_n(n), _check_h(h)
    S = DirectionMatrix(_basis(n, range(n), h))
    return S, DirectionFamily.common(-S, n)


def build_diag(n: int, h: float, subset: Sequence[int] | None = None) -> tuple[DirectionMatrix, DirectionFamily]:
    """Partial diagonal ``S`` with columns ``h e^i`` (``i`` in ``subset``) and ``T_j = -s^j``."""
    n, h = _check_n(n), _check_h(h)
    subset = list(range(n)) if subset is None else [int(i) for i in subset]
    if not subset or len(set(subset)) != len(subset) or any(not 0 <= i < n for i in subset):
        raise DirectionError(f"subset must be non-empty distinct indices in [0, {n}), got {subset}")
    S = DirectionMatrix(_basis(n, subset, h))
    return S, DirectionFamily.of([-DirectionMatrix(c) for c in S.columns])


def build_off_diag(n: int, h: float) -> tuple[DirectionMatrix, DirectionFamily]:
    """``S = h[e^1 .. e^{n-1}]`` and ``T_j = h[e^{j+1} .. e^n]``."""
    n, h = _check_n(n, minimum=2), _check_h(h)
    S = DirectionMatrix(_basis(n, range(n - 1), h))
    return S, DirectionFamily.of([_basis(n, range(j + 1, n), h) for j in range(n - 1)])


def build_row(n: int, i: int, h: float) -> tuple[DirectionMatrix, DirectionFamily]:
    n, h = _check_n(n), _check_h(h)
    if int(i) != i or not 0 <= i < n:
        raise DirectionError(f"row index must be in [0, {n}), got {i}")
    S = DirectionMatrix(_basis(n, [int(i)], h))
    return S, DirectionFamily.common(_basis(n, range(n), h), 1)


def build_hvp(n: int, v, h: float, centered: bool = False) -> tuple[DirectionMatrix, DirectionFamily]:
    """Square ``S`` whose first column is ``-h v``; inner direction ``h v``.

    The remaining columns are ``h e^j`` for every ``j`` except the coordinate
    where ``|v_j|`` is largest, which keeps ``S`` nonsingular. ``centered`` does
    not change the directions; it is accepted so callers can pass the scheme
    flags through unchanged.
    """
    n, h = _check_n(n), _check_h(h)
    v = np.asarray(v, dtype=float).reshape(-1)
    if v.shape != (n,):
        raise DirectionError(f"v must have length {n}")
    if not np.any(v != 0.0):
        raise DirectionError("v must be nonzero")
    hv = h * v
    drop = int(np.argmax(np.abs(v)))
    S = np.column_stack([-hv, _basis(n, [j for j in range(n) if j != drop], h)])
    return DirectionMatrix(S), DirectionFamily.common(hv, n)


def check_offdiag_recipe(S, F) -> None:
    """Validate a general off-diagonal configuration.

    ``S`` must be a subset of the columns of a full-column-rank partial diagonal
    matrix whose last row is zero. Each ``T_j`` must hold columns of one
    nonsingular diagonal matrix ``T``, restricted to indices after the row of
    the nonzero entry of ``s^j``.
    """
    S = as_direction(S)
    family = as_family(F, S.m)
    info = partial_diagonal_info(S.matrix)
    if not (info.is_partial_diagonal and info.full_column_rank):
        raise DirectionError("S must be partial diagonal with full column rank")
    n = S.n
    if np.any(S.matrix[n - 1] != 0.0):
        raise DirectionError("last row of S must be zero")
    scale: dict[int, float] = {}
    for u, T in zip(info.rows, family):
        t_info = partial_diagonal_info(T.matrix)
        if not (t_info.is_partial_diagonal and t_info.full_column_rank):
            raise DirectionError("each T_j must be columns of a nonsingular diagonal matrix")
        for col, r in enumerate(t_info.rows):
            if r <= u:
                raise DirectionError(f"T_j may only use directions after index {u}")
            value = T.matrix[r, col]
            if scale.setdefault(r, value) != value:
                raise DirectionError("T_j columns must come from one diagonal matrix")


SCHEME_KINDS = (
    "gsh-minimal",
    "gcsh-minimal",
    "diag",
    "cshd",
    "offdiag",
    "offdiag-gcsh",
    "row",
    "row-gcsh",
    "hvp-gsh",
    "hvp-gcsh",
    "gcsh-example1",
    "gcsh-example2",
    "custom",
)

_ALIASES = {"hvp": "hvp-gsh", "gsh": "gsh-minimal", "gcsh": "gcsh-minimal"}

# Directions from the two worked diagonal examples (n = 3).
EXAMPLE1_S = np.array([[0.1, 0.0, 0.0], [0.0, 0.1, 0.2], [0.0, 0.0, 0.0]])
EXAMPLE2_S = np.array([[0.1, 0.1], [0.0, 0.1], [0.0, 0.0]])


@dataclass(frozen=True)
class SchemeSpec:
    """A named direction recipe plus its parameters.

    Indices (``row``, ``subset``) are 0-based. ``S`` and ``family`` are only
    read for ``kind="custom"``; ``recipe="offdiag"`` additionally validates a
    custom configuration against the general off-diagonal recipe.
    """

    kind: str
    n: int
    h: float | None = None
    row: int | None = None
    v: tuple[float, ...] | None = None
    subset: tuple[int, ...] | None = None
    centered: bool = False
    S: object = field(default=None, compare=False)
    family: object = field(default=None, compare=False)
    recipe: str | None = None

    def __post_init__(self):
        kind = _ALIASES.get(self.kind, self.kind)
        if kind not in SCHEME_KINDS:
            raise DirectionError(f"unknown scheme {self.kind!r}; choose from {', '.join(SCHEME_KINDS)}")
        object.__setattr__(self, "kind", kind)
        if kind not in ("custom",):
            object.__setattr__(self, "centered", kind in CENTERED_KINDS)
        if self.h is not None:
            _check_h(self.h)
        if self.v is not None:
            object.__setattr__(self, "v", tuple(float(x) for x in np.asarray(self.v).reshape(-1)))
        if kind.startswith("hvp") and (self.v is None or not any(self.v)):
            raise DirectionError("v must be nonzero")
        if kind in ("row", "row-gcsh") and self.row is None:
            raise DirectionError("row scheme needs a row index")
        if kind.startswith("gcsh-example") and self.n != 3:
            raise DirectionError("the worked examples are three-dimensional")

    @property
    def output(self) -> str:
        """``"matrix"``, ``"vector"`` (HVP) or ``"diagonal"`` (CSHD)."""
        if self.kind.startswith("hvp"):
            return "vector"
        if self.kind == "cshd":
            return "diagonal"
        return "matrix"

    def step(self, x0) -> float:
        return default_step(x0) if self.h is None else float(self.h)

    def directions(self, x0=None) -> tuple[DirectionMatrix, DirectionFamily | None]:
        """Build ``(S, family)``; ``family`` is ``None`` for CSHD."""
        h = self.step(np.zeros(self.n) if x0 is None else x0)
        kind = self.kind
        if kind == "gsh-minimal":
            return build_full_gsh_minimal(self.n, h)
        if kind == "gcsh-minimal":
            return build_full_gcsh_minimal(self.n, h)
        if kind in ("diag", "cshd"):
            S, F = build_diag(self.n, h, self.subset)
            return (S, None) if kind == "cshd" else (S, F)
        if kind in ("offdiag", "offdiag-gcsh"):
            return build_off_diag(self.n, h)
        if kind in ("row", "row-gcsh"):
            return build_row(self.n, self.row, h)
        if kind in ("hvp-gsh", "hvp-gcsh"):
            return build_hvp(self.n, self.v, h, centered=self.centered)
        if kind in ("gcsh-example1", "gcsh-example2"):
            S = DirectionMatrix(EXAMPLE1_S if kind == "gcsh-example1" else EXAMPLE2_S)
            return S, DirectionFamily.of([-DirectionMatrix(c) for c in S.columns])
        S = as_direction(self.S)
        if S.n != self.n:
            raise DirectionError(f"custom S has {S.n} rows, expected {self.n}")
        family = as_family(self.family, S.m)
        if self.recipe == "offdiag":
            check_offdiag_recipe(S, family)
        return S, family


CENTERED_KINDS = frozenset(
    {"gcsh-minimal", "diag", "cshd", "offdiag-gcsh", "row-gcsh", "hvp-gcsh", "gcsh-example1", "gcsh-example2"}
)

# Closed-form distinct-evaluation counts, keyed by scheme kind.
EVAL_COUNT_FORMULAS = {
    "gsh-minimal": ("(n+1)(n+2)/2", lambda n, p: (n + 1) * (n + 2) // 2),
    "gcsh-minimal": ("n^2+n+1", lambda n, p: n * n + n + 1),
    "diag": ("2|subset|+1", lambda n, p: 2 * p + 1),
    "cshd": ("2|subset|+1", lambda n, p: 2 * p + 1),
    "offdiag": ("(n(n+1)+2)/2", lambda n, p: (n * (n + 1) + 2) // 2),
    "offdiag-gcsh": ("n^2+n+1", lambda n, p: n * n + n + 1),
    "row": ("2n+1", lambda n, p: 2 * n + 1),
    "row-gcsh": ("4n+1", lambda n, p: 4 * n + 1),
    "hvp-gsh": ("2n+1", lambda n, p: 2 * n + 1),
    "hvp-gcsh": ("4n-1", lambda n, p: 4 * n - 1),
}


def closed_form_count(spec: SchemeSpec) -> tuple[str, int] | None:
    entry = EVAL_COUNT_FORMULAS.get(spec.kind)
    if entry is None:
        return None
    name, fn = entry
    p = len(spec.subset) if spec.subset is not None else spec.n
    return name, fn(spec.n, p)
