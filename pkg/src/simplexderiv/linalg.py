"""Small dense linear algebra used by every estimator.

All routines take and return plain ``numpy`` arrays. Nothing here mutates its
inputs.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np


class NonFiniteInputError(ValueError):
    pass


def _as_matrix(A) -> np.ndarray:
    A = np.asarray(A, dtype=float)
    if A.ndim == 1:
        A = A[:, None]
    if A.ndim != 2 or A.shape[0] < 1 or A.shape[1] < 1:
        raise ValueError(f"expected a non-empty 2-D matrix, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise NonFiniteInputError("matrix contains non-finite entries")
    return A


def pinv(A) -> np.ndarray:
    """Moore-Penrose pseudoinverse through the SVD.

    Singular values below ``max(rows, cols) * eps * sigma_max`` are treated as
    zero. A 1-D input is read as a single column, so ``pinv(v)`` is a
    ``1 x n`` row.
    """
    A = _as_matrix(A)
    U, sigma, Vt = np.linalg.svd(A, full_matrices=False)
    if sigma.size == 0 or sigma[0] == 0.0:
        return np.zeros((A.shape[1], A.shape[0]))
    cutoff = max(A.shape) * np.finfo(float).eps * sigma[0]
    keep = sigma > cutoff
    inv_sigma = np.zeros_like(sigma)
    inv_sigma[keep] = 1.0 / sigma[keep]
    return (Vt.T * inv_sigma) @ U.T


def matrix_rank(A) -> int:
    A = _as_matrix(A)
    sigma = np.linalg.svd(A, compute_uv=False)
    if sigma[0] == 0.0:
        return 0
    return int(np.sum(sigma > max(A.shape) * np.finfo(float).eps * sigma[0]))


def spectral_norm(A) -> float:
    """Induced 2-norm (largest singular value)."""
    A = _as_matrix(A)
    return float(np.linalg.svd(A, compute_uv=False)[0])


def hadamard(A, B) -> np.ndarray:
    A = np.asarray(A, dtype=float)
    B = np.asarray(B, dtype=float)
    if A.shape != B.shape:
        raise ValueError(f"shape mismatch: {A.shape} vs {B.shape}")
    return A * B


def penrose_residuals(A, A_pinv) -> tuple[float, float, float, float]:
    """Spectral norms of the four Penrose-equation residuals."""
    A = _as_matrix(A)
    X = np.asarray(A_pinv, dtype=float)
    AX = A @ X
    XA = X @ A
    return (
        spectral_norm(AX @ A - A),
        spectral_norm(X @ AX - X),
        spectral_norm(AX.T - AX),
        spectral_norm(XA.T - XA),
    )


@dataclass(frozen=True)
class PartialDiagonalInfo:
    """Classification of a matrix against the partial-diagonal definition.

    ``rows`` holds, for each column, the (0-based) row of its only possibly
    nonzero entry. It is ``None`` when the matrix is not partial diagonal.
    """

    is_partial_diagonal: bool
    rows: tuple[int, ...] | None
    full_column_rank: bool


def partial_diagonal_info(M) -> PartialDiagonalInfo:
    """Decide whether every column of ``M`` is a distinct column of one diagonal matrix.

    Zero tests are exact. A zero column is matched to any row no other column
    uses, which is always possible when ``cols <= rows``.
    """
    M = _as_matrix(M)
    n, m = M.shape
    full_rank = bool(np.all(np.any(M != 0.0, axis=0)))
    if m > n:
        return PartialDiagonalInfo(False, None, full_rank)
    rows: list[int | None] = []
    for j in range(m):
        nz = np.flatnonzero(M[:, j])
        if nz.size > 1:
            return PartialDiagonalInfo(False, None, full_rank)
        rows.append(int(nz[0]) if nz.size == 1 else None)
    used = [r for r in rows if r is not None]
    if len(set(used)) != len(used):
        return PartialDiagonalInfo(False, None, full_rank)
    free = iter(r for r in range(n) if r not in set(used))
    resolved = tuple(r if r is not None else next(free) for r in rows)
    return PartialDiagonalInfo(True, resolved, full_rank)


def pinv_partial_diagonal(S) -> np.ndarray:
    """Pseudoinverse of a full-column-rank partial diagonal matrix, row by row.

    Row ``j`` of the result is ``(1 / s^j_{u_j}) e^{u_j}`` where ``u_j`` is the
    row of the single nonzero entry of column ``j``.
    """
    S = _as_matrix(S)
    info = partial_diagonal_info(S)
    if not (info.is_partial_diagonal and info.full_column_rank):
        raise ValueError("matrix is not a partial diagonal matrix with full column rank")
    out = np.zeros((S.shape[1], S.shape[0]))
    for j, u in enumerate(info.rows):
        out[j, u] = 1.0 / S[u, j]
    return out
