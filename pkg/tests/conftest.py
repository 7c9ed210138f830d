import numpy as np
import pytest
from hypothesis import settings

settings.register_profile("default", deadline=None, print_blob=True)
settings.load_profile("default")


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def quadratic(A, b, c=0.0):
    """``0.5 x^T A x + b^T x + c`` and its Hessian (``A`` symmetrized)."""
    A = 0.5 * (np.asarray(A) + np.asarray(A).T)
    b = np.asarray(b)

    def f(x):
        return float(0.5 * x @ A @ x + b @ x + c)

    return f, A


def random_partial_diagonal(rng, n, m=None):
    """Full-column-rank partial diagonal ``n x m`` matrix with random row order and scales."""
    m = rng.integers(1, n + 1) if m is None else m
    rows = rng.choice(n, size=m, replace=False)
    S = np.zeros((n, m))
    for j, r in enumerate(rows):
        S[r, j] = rng.choice([-1, 1]) * rng.uniform(0.01, 0.2)
    return S


def random_projection_config(rng, condition):
    """``(S, [T_j])`` meeting one of the conditions that make ``proj_st`` a projection.

    ``"i"``: ``S`` has full column rank (``m <= n``), ``T_j`` arbitrary.
    ``"ii"``: every ``T_j`` has full row rank (``k_j >= n``), ``S`` arbitrary.
    ``"iii"``: one ``T`` shared by all columns, both arbitrary.
    """
    n = int(rng.integers(1, 6))
    if condition == "i":
        m = int(rng.integers(1, n + 1))
        S = rng.normal(size=(n, m))
        Ts = [rng.normal(size=(n, int(rng.integers(1, n + 2)))) for _ in range(m)]
    elif condition == "ii":
        m = int(rng.integers(1, n + 3))
        S = rng.normal(size=(n, m))
        Ts = [rng.normal(size=(n, int(rng.integers(n, n + 3)))) for _ in range(m)]
    else:
        m = int(rng.integers(1, n + 3))
        S = rng.normal(size=(n, m))
        T = rng.normal(size=(n, int(rng.integers(1, n + 2))))
        Ts = [T] * m
    return S * 0.1, [T * 0.1 for T in Ts]


def pytest_terminal_summary(terminalreporter):
    import sys

    module = sys.modules.get("test_acceptance")
    if module is None or not module.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in module.RESULTS:
        terminalreporter.write_line(line)
