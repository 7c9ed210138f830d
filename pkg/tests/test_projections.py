import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import random_partial_diagonal, random_projection_config
from simplexderiv.directions import build_off_diag, build_row
from simplexderiv.estimators import gcsh, gsh
from simplexderiv.harness import random_polynomial
from simplexderiv.projections import extract_diag, extract_strict_upper, proj_st, proj_vec, row_mask

seeds = st.integers(0, 2**32 - 1)
conditions = st.sampled_from(["i", "ii", "iii"])


def _close(a, b, tol=1e-10):
    scale = max(1.0, np.abs(a).max(), np.abs(b).max())
    assert np.abs(a - b).max() <= tol * scale


@given(seeds, conditions)
def test_idempotent(seed, cond):
    rng = np.random.default_rng(seed)
    S, Ts = random_projection_config(rng, cond)
    M = rng.normal(size=(S.shape[0],) * 2)
    P = proj_st(M, S, Ts)
    _close(proj_st(P, S, Ts), P)


@given(seeds, conditions)
def test_linear(seed, cond):
    rng = np.random.default_rng(seed)
    S, Ts = random_projection_config(rng, cond)
    n = S.shape[0]
    A, B = rng.normal(size=(n, n)), rng.normal(size=(n, n))
    a, b = rng.normal(size=2)
    _close(proj_st(a * A + b * B, S, Ts), a * proj_st(A, S, Ts) + b * proj_st(B, S, Ts))


@given(seeds, conditions)
def test_estimates_are_invariant(seed, cond):
    rng = np.random.default_rng(seed)
    S, Ts = random_projection_config(rng, cond)
    p = random_polynomial(rng, S.shape[0], 4)
    x0 = rng.normal(size=S.shape[0])
    for est in (gsh(p, x0, S, Ts), gcsh(p, x0, S, Ts)):
        _close(proj_st(est, S, Ts), est)


def test_common_matrix_fast_path_matches_sum():
    rng = np.random.default_rng(0)
    S = rng.normal(size=(3, 4))
    T = rng.normal(size=(3, 2))
    M = rng.normal(size=(3, 3))
    slow = sum(np.outer(np.linalg.pinv(S.T)[:, j], (S.T @ M)[j] @ T @ np.linalg.pinv(T)) for j in range(4))
    _close(proj_st(M, S, T), slow, 1e-12)
    _close(proj_st(M, S, [T.copy() for _ in range(4)]), slow, 1e-12)


def test_full_rank_projection_is_identity():
    rng = np.random.default_rng(1)
    M = rng.normal(size=(4, 4))
    _close(proj_st(M, rng.normal(size=(4, 4)), rng.normal(size=(4, 5))), M, 1e-12)


def test_partial_diagonal_projection_keeps_only_the_diagonal():
    rng = np.random.default_rng(2)
    for _ in range(20):
        n = int(rng.integers(1, 7))
        S = random_partial_diagonal(rng, n)
        M = rng.normal(size=(n, n))
        M = M + M.T
        Ts = [-c[:, None] for c in S.T]
        # the same as projecting the diagonal part, and diagonal itself
        _close(proj_st(M, S, Ts), proj_st(extract_diag(M), S, Ts), 1e-12)
        P = proj_st(M, S, Ts)
        _close(P, extract_diag(P), 1e-12)
        # entries outside the rows of S are zeroed
        rows = np.flatnonzero(np.any(S != 0, axis=1))
        expect = np.zeros(n)
        expect[rows] = np.diag(M)[rows]
        _close(np.diag(P), expect, 1e-12)


def test_offdiag_projection_sees_only_the_strict_upper_triangle():
    rng = np.random.default_rng(3)
    for n in range(2, 7):
        S, F = build_off_diag(n, 0.1)
        M = rng.normal(size=(n, n))
        M = M + M.T
        _close(proj_st(M, S, F), extract_strict_upper(M), 1e-12)


@pytest.mark.parametrize("i", range(4))
def test_row_projection_is_the_row_mask(i):
    rng = np.random.default_rng(4)
    S, F = build_row(4, i, 0.1)
    M = rng.normal(size=(4, 4))
    _close(proj_st(M, S, F), row_mask(M, i), 1e-12)
    _close(proj_st(M, S, F), proj_st(row_mask(M, i), S, F), 1e-12)


def test_proj_vec_is_orthogonal_projection():
    rng = np.random.default_rng(5)
    S = rng.normal(size=(5, 2))
    w = rng.normal(size=5)
    p = proj_vec(w, S)
    _close(proj_vec(p, S), p, 1e-12)
    _close(S.T @ (w - p), np.zeros(2), 1e-12)


def test_shape_errors():
    with pytest.raises(ValueError):
        proj_st(np.eye(2), np.eye(3), np.eye(3))
    with pytest.raises(ValueError):
        extract_diag(np.ones((2, 3)))
    with pytest.raises(ValueError):
        proj_vec(np.ones(2), np.eye(3))
