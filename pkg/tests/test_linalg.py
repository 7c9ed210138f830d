import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from simplexderiv.linalg import (
    NonFiniteInputError,
    hadamard,
    matrix_rank,
    partial_diagonal_info,
    penrose_residuals,
    pinv,
    pinv_partial_diagonal,
    spectral_norm,
)

shapes = st.tuples(st.integers(1, 6), st.integers(1, 6))
# exact zeros plus magnitudes in [1e-3, 10]; subnormal-scale entries would overflow the residual scale
finite = st.just(0.0) | st.floats(1e-3, 10) | st.floats(-10, -1e-3)


@given(shapes.flatmap(lambda s: arrays(float, s, elements=finite)))
def test_pinv_satisfies_penrose_conditions(A):
    X = pinv(A)
    assert X.shape == A.shape[::-1]
    scale = max(1.0, spectral_norm(A)) * max(1.0, spectral_norm(X))
    assert max(penrose_residuals(A, X)) <= 1e-9 * scale**2


def test_pinv_rank_deficient_and_zero():
    A = np.array([[1.0, 2.0], [2.0, 4.0], [0.0, 0.0]])
    X = pinv(A)
    assert max(penrose_residuals(A, X)) < 1e-12
    assert matrix_rank(A) == 1
    assert np.array_equal(pinv(np.zeros((2, 3))), np.zeros((3, 2)))


def test_pinv_of_vector_is_column_convention():
    v = np.array([3.0, 4.0])
    np.testing.assert_allclose(pinv(v), [[3 / 25, 4 / 25]])


def test_pinv_rejects_nonfinite():
    with pytest.raises(NonFiniteInputError):
        pinv(np.array([[1.0, np.nan]]))


@given(arrays(float, (4, 3), elements=finite))
def test_spectral_norm_matches_eigenvalue_oracle(A):
    lam = np.linalg.eigvalsh(A.T @ A).max()
    assert abs(spectral_norm(A) - np.sqrt(max(lam, 0.0))) <= 1e-9 * max(1.0, spectral_norm(A))


def test_hadamard_shape_checked():
    A = np.arange(6.0).reshape(2, 3)
    np.testing.assert_array_equal(hadamard(A, A), A * A)
    with pytest.raises(ValueError):
        hadamard(A, A.T)


# the four matrices used to illustrate the definition
M = np.array([[1.0, 0], [0, 0], [0, 2]])
M_ddot = np.array([[0.0, 1], [0, 0], [2, 0]])
M_tilde = np.array([[1.0, 0, 3], [0, 0, 0], [0, 2, 0]])
M_bar = np.array([[1.0, 1], [0, 0], [0, 0]])


@pytest.mark.parametrize("A,expected", [(M, True), (M_ddot, True), (M_tilde, False), (M_bar, False)])
def test_partial_diagonal_classification(A, expected):
    assert partial_diagonal_info(A).is_partial_diagonal is expected


def test_partial_diagonal_rows_and_rank():
    info = partial_diagonal_info(M_ddot)
    assert info.rows == (2, 0) and info.full_column_rank
    zero_col = np.array([[1.0, 0], [0, 0], [0, 0]])
    info = partial_diagonal_info(zero_col)
    assert info.is_partial_diagonal and not info.full_column_rank
    assert not partial_diagonal_info(np.eye(2, 3)).is_partial_diagonal  # more columns than rows


@given(st.integers(1, 7), st.data())
def test_pinv_partial_diagonal_matches_svd(n, data):
    m = data.draw(st.integers(1, n))
    rows = data.draw(st.permutations(range(n)))[:m]
    scales = data.draw(st.lists(st.floats(0.01, 5) | st.floats(-5, -0.01), min_size=m, max_size=m))
    S = np.zeros((n, m))
    for j, (r, s) in enumerate(zip(rows, scales)):
        S[r, j] = s
    exact = pinv_partial_diagonal(S)
    np.testing.assert_allclose(exact, pinv(S), rtol=1e-12, atol=1e-14 * np.abs(exact).max())


def test_pinv_partial_diagonal_preconditions():
    with pytest.raises(ValueError):
        pinv_partial_diagonal(M_tilde)
    with pytest.raises(ValueError):
        pinv_partial_diagonal(np.array([[1.0, 0], [0, 0]]))
