"""Projection operators onto matrices of directions, plus structured extractors."""
from __future__ import annotations

import numpy as np

from .directions import as_direction, as_family


def proj_st(M, S, T) -> np.ndarray:
    """``sum_j (S^T)^+ e^j (e^j)^T S^T M T_j T_j^+``.

    With a shared ``T`` this is ``(S^T)^+ S^T M T T^+``. It is a projection
    (idempotent) when ``S`` has full column rank, every ``T_j`` has full row
    rank, or all ``T_j`` coincide.
    """
    S = as_direction(S)
    family = as_family(T, S.m)
    M = np.asarray(M, dtype=float)
    n = S.n
    if M.shape != (n, n):
        raise ValueError(f"expected a {n}x{n} matrix, got {M.shape}")
    P = S.pinv_t
    common = family.common_matrix
    if common is not None:
        return P @ (S.matrix.T @ M) @ (common.matrix @ common.pinv)
    SM = S.matrix.T @ M
    out = np.zeros((n, n))
    for j, Tj in enumerate(family):
        out += np.outer(P[:, j], SM[j] @ (Tj.matrix @ Tj.pinv))
    return out


def proj_vec(w, S) -> np.ndarray:
    """Orthogonal projection ``(S^T)^+ S^T w`` onto the span of the columns of ``S``."""
    S = as_direction(S)
    w = np.asarray(w, dtype=float).reshape(-1)
    if w.size != S.n:
        raise ValueError(f"vector has length {w.size}, expected {S.n}")
    return S.pinv_t @ (S.matrix.T @ w)


def _square(M) -> np.ndarray:
    M = np.asarray(M, dtype=float)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {M.shape}")
    return M


def extract_diag(M) -> np.ndarray:
    return np.diag(np.diag(_square(M)))


def extract_strict_upper(M) -> np.ndarray:
    return np.triu(_square(M), k=1)


def row_mask(M, i: int) -> np.ndarray:
    """``Diag(e^i) M``: keep row ``i`` (0-based), zero the rest."""
    M = _square(M)
    out = np.zeros_like(M)
    out[i] = M[i]
    return out
