"""Right-hand sides of the error bounds for each estimator.

Every bound is linear in the relevant Lipschitz constant and scales as
``Delta_u`` (forward schemes) or ``Delta_u**2`` (centered schemes) at a fixed
ratio ``Delta_u / Delta_l``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .directions import as_direction, as_family, radii


@dataclass(frozen=True)
class BoundInputs:
    m: int
    k: int
    delta_u: float
    delta_l: float
    delta_s: float
    s_hat_pinv_norm: float  # ||(S_hat^T)^+||
    t_hat_pinv_norm: float  # largest ||T_hat_j^+||
    lip2: float = 0.0  # Lipschitz constant of the Hessian
    lip3: float = 0.0  # Lipschitz constant of the third-derivative tensor
    v_norm: float = 1.0
    n: int | None = None

    def __post_init__(self):
        if not self.delta_u >= self.delta_l > 0:
            raise ValueError("need delta_u >= delta_l > 0")
        if min(self.lip2, self.lip3, self.s_hat_pinv_norm, self.t_hat_pinv_norm, self.v_norm) < 0:
            raise ValueError("norms and Lipschitz constants must be nonnegative")

    @property
    def ratio(self) -> float:
        return self.delta_u / self.delta_l

    @classmethod
    def from_directions(cls, S, T, *, lip2: float = 0.0, lip3: float = 0.0, v=None) -> "BoundInputs":
        S = as_direction(S)
        r = radii(S, as_family(T, S.m))
        return cls(
            m=S.m, k=r.k, delta_u=r.delta_u, delta_l=r.delta_l, delta_s=r.delta_s,
            s_hat_pinv_norm=r.s_hat_pinv_norm, t_hat_pinv_norm=r.t_hat_pinv_norm,
            lip2=lip2, lip3=lip3,
            v_norm=1.0 if v is None else float(np.linalg.norm(v)), n=S.n,
        )


def gsh_bound(b: BoundInputs, variant: str = "general") -> float:
    norms = b.s_hat_pinv_norm * b.t_hat_pinv_norm
    if variant == "general":
        return 4 * b.m * math.sqrt(b.k) * b.lip2 * norms * b.ratio**2 * b.delta_u
    if variant == "common_T":
        return 4 * math.sqrt(b.m * b.k) * b.lip2 * b.ratio * norms * b.delta_u
    raise ValueError(f"unknown variant {variant!r}")


def gcsh_bound(b: BoundInputs, variant: str = "general") -> float:
    norms = b.s_hat_pinv_norm * b.t_hat_pinv_norm
    if variant == "general":
        return 2 * b.m * math.sqrt(b.k) * b.lip3 * b.ratio**2 * norms * b.delta_u**2
    if variant == "common_T":
        return 2 * math.sqrt(b.m * b.k) * b.lip3 * b.ratio * norms * b.delta_u**2
    raise ValueError(f"unknown variant {variant!r}")


def diag_bound(lip3: float, delta_s: float) -> float:
    """``L3 * Delta_S**2 / 12`` for partial diagonal ``S`` with ``T_j = -s^j``."""
    return lip3 * delta_s**2 / 12.0


def offdiag_bound(b: BoundInputs, centered: bool = False) -> float:
    return gcsh_bound(b, "general") if centered else gsh_bound(b, "general")


def row_bound(b: BoundInputs, centered: bool = False) -> float:
    """Bound for ``S = h e^i``; the outer-matrix norm is exactly one and drops out."""
    if centered:
        return 2 * math.sqrt(b.k) * b.lip3 * b.ratio * b.t_hat_pinv_norm * b.delta_u**2
    return 4 * math.sqrt(b.k) * b.lip2 * b.ratio * b.t_hat_pinv_norm * b.delta_u


def hvp_bound(b: BoundInputs, centered: bool = False) -> float:
    if centered:
        return 2 * math.sqrt(b.m) * b.lip3 * b.ratio * b.s_hat_pinv_norm * b.v_norm * b.delta_u**2
    return 4 * math.sqrt(b.m) * b.lip2 * b.ratio * b.s_hat_pinv_norm * b.v_norm * b.delta_u
