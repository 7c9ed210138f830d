import itertools
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import random_partial_diagonal
from simplexderiv.bounds import (
    BoundInputs,
    diag_bound,
    gcsh_bound,
    gsh_bound,
    hvp_bound,
    offdiag_bound,
    row_bound,
)
from simplexderiv.directions import build_row


def unit(**kw):
    base = dict(m=1, k=1, delta_u=0.1, delta_l=0.1, delta_s=0.1, s_hat_pinv_norm=1.0, t_hat_pinv_norm=1.0,
                lip2=1.0, lip3=1.0)
    base.update(kw)
    return BoundInputs(**base)


def test_plug_in_values():
    assert gsh_bound(unit(), "general") == pytest.approx(0.4)
    assert gcsh_bound(unit(), "general") == pytest.approx(0.02)
    assert diag_bound(12.0, 1.0) == 1.0
    # with m = k = 1 the two variants agree
    assert gsh_bound(unit(), "common_T") == pytest.approx(gsh_bound(unit(), "general"))


def test_zero_lipschitz_gives_zero():
    b = unit(lip2=0.0, lip3=0.0, m=3, k=2)
    for value in (gsh_bound(b), gsh_bound(b, "common_T"), gcsh_bound(b), gcsh_bound(b, "common_T"),
                  diag_bound(0.0, 0.3), offdiag_bound(b), offdiag_bound(b, True), row_bound(b), row_bound(b, True),
                  hvp_bound(b), hvp_bound(b, True)):
        assert value == 0.0


@given(st.floats(1e-4, 1.0), st.floats(1.0, 5.0), st.integers(1, 6), st.integers(1, 6))
def test_scaling_at_fixed_ratio(du, ratio, m, k):
    b = unit(m=m, k=k, delta_u=du, delta_l=du / ratio, lip2=2.0, lip3=3.0)
    half = unit(m=m, k=k, delta_u=du / 2, delta_l=du / ratio / 2, lip2=2.0, lip3=3.0)
    quarter = unit(m=m, k=k, delta_u=du / 4, delta_l=du / ratio / 4, lip2=2.0, lip3=3.0)
    for variant in ("general", "common_T"):
        assert gsh_bound(half, variant) == pytest.approx(gsh_bound(b, variant) / 2, rel=1e-12)
        assert gcsh_bound(quarter, variant) == pytest.approx(gcsh_bound(b, variant) / 16, rel=1e-12)
    assert hvp_bound(half) == pytest.approx(hvp_bound(b) / 2, rel=1e-12)
    assert hvp_bound(quarter, True) == pytest.approx(hvp_bound(b, True) / 16, rel=1e-12)


def test_formulas_by_hand():
    b = unit(m=4, k=9, delta_u=0.2, delta_l=0.1, s_hat_pinv_norm=1.5, t_hat_pinv_norm=2.0, lip2=3.0, lip3=5.0,
             v_norm=0.5)
    assert gsh_bound(b) == pytest.approx(4 * 4 * 3 * 3.0 * 1.5 * 2.0 * 4 * 0.2)
    assert gsh_bound(b, "common_T") == pytest.approx(4 * 6 * 3.0 * 2 * 1.5 * 2.0 * 0.2)
    assert gcsh_bound(b) == pytest.approx(2 * 4 * 3 * 5.0 * 4 * 1.5 * 2.0 * 0.04)
    assert gcsh_bound(b, "common_T") == pytest.approx(2 * 6 * 5.0 * 2 * 1.5 * 2.0 * 0.04)
    assert row_bound(b) == pytest.approx(4 * 3 * 3.0 * 2 * 2.0 * 0.2)
    assert row_bound(b, True) == pytest.approx(2 * 3 * 5.0 * 2 * 2.0 * 0.04)
    assert hvp_bound(b) == pytest.approx(4 * 2 * 3.0 * 2 * 1.5 * 0.5 * 0.2)
    assert hvp_bound(b, True) == pytest.approx(2 * 2 * 5.0 * 2 * 1.5 * 0.5 * 0.04)
    assert offdiag_bound(b) == gsh_bound(b) and offdiag_bound(b, True) == gcsh_bound(b)


def test_hvp_bound_linear_in_v():
    assert hvp_bound(unit(v_norm=2.0)) == pytest.approx(2 * hvp_bound(unit()))
    assert hvp_bound(unit(v_norm=2.0), True) == pytest.approx(2 * hvp_bound(unit(), True))


def test_row_bound_has_no_outer_norm_factor():
    S, F = build_row(5, 2, 0.1)
    b = BoundInputs.from_directions(S, F, lip2=1.0, lip3=1.0)
    assert b.s_hat_pinv_norm == pytest.approx(1.0)
    assert row_bound(b) == pytest.approx(4 * math.sqrt(5) * b.t_hat_pinv_norm * b.ratio * b.delta_u)


def test_diag_bound_never_exceeds_general_gcsh_bound():
    rng = np.random.default_rng(0)
    for n, lip3 in itertools.product(range(1, 7), (0.5, 1.0, 30.0)):
        for _ in range(10):
            S = random_partial_diagonal(rng, n)
            Ts = [-c[:, None] for c in S.T]
            b = BoundInputs.from_directions(S, Ts, lip3=lip3)
            assert diag_bound(lip3, b.delta_s) <= gcsh_bound(b, "general")


def test_invalid_inputs():
    with pytest.raises(ValueError):
        unit(delta_u=0.1, delta_l=0.2)
    with pytest.raises(ValueError):
        unit(delta_l=0.0)
    with pytest.raises(ValueError):
        unit(lip2=-1.0)
    with pytest.raises(ValueError):
        gsh_bound(unit(), "other")
