import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import mp_rho
from fgnproj import (
    DomainError,
    SingularRegime,
    gamma3,
    gamma4,
    gamma4_crossing,
    gamma4_denominator_split,
    gamma4_full_polynomial,
    gamma_h_zero,
    limits_n3,
    limits_n4,
    solve_system,
)

H_GRID = np.round(np.arange(0.01, 1.0, 0.02), 2).tolist()


def mp_row_near_one(n, eps="1e-30", dps=120):
    """Normal equations at H = 1 - eps in very high precision: a numerical H -> 1 limit."""
    with mpmath.workdps(dps):
        h = 1 - mpmath.mpf(eps)
        r = [mp_rho(h, k, dps) for k in range(n)]
        a = mpmath.matrix(n - 1, n - 1)
        for i in range(n - 1):
            for j in range(n - 1):
                a[i, j] = r[abs(i - j)]
        return [float(v) for v in mpmath.lu_solve(a, mpmath.matrix(r[1:n]))]


@pytest.mark.parametrize("h", H_GRID)
def test_gamma3_matches_solver(h):
    np.testing.assert_allclose(gamma3(h), solve_system(h, 3).gammas, atol=1e-13)


@pytest.mark.parametrize("h", H_GRID)
def test_gamma4_matches_solver(h):
    np.testing.assert_allclose(gamma4(h), solve_system(h, 4).gammas, atol=1e-13)


@given(st.floats(0.01, 0.99))
def test_factored_and_expanded_numerators_agree(h):
    assert gamma4_full_polynomial(h) == pytest.approx(gamma4(h)[1], abs=1e-12)


@given(st.floats(0.501, 0.999))
def test_gamma4_denominator_terms_positive(h):
    a, b = gamma4_denominator_split(h)
    assert a > 0 and b > 0


def test_limits_match_high_precision_solve():
    np.testing.assert_allclose(limits_n3(), mp_row_near_one(3), atol=1e-12)
    np.testing.assert_allclose(limits_n4(), mp_row_near_one(4), atol=1e-12)


def test_limits_sum_to_one():
    # at H = 1 every increment is the same variable, so the weights sum to 1
    assert math.fsum(limits_n3()) == pytest.approx(1.0, abs=1e-12)
    assert math.fsum(limits_n4()) == pytest.approx(1.0, abs=1e-12)


@pytest.mark.parametrize("fn,limits,tol", [(gamma3, limits_n3, 2e-3), (gamma4, limits_n4, 5e-3)])
def test_approach_to_limit(fn, limits, tol):
    np.testing.assert_allclose(fn(1 - 1e-4), limits(), atol=tol)


def test_limit_decimals():
    assert [round(v, 6) for v in limits_n3()] == [0.783083, 0.216917]
    assert [round(v, 6) for v in limits_n4()] == [0.742250, 0.069508, 0.188242]


@pytest.mark.parametrize("n", [2, 3, 5, 17, 50])
def test_h_zero_row(n):
    row = gamma_h_zero(n)
    np.testing.assert_allclose(row.gammas, solve_system(0.0, n).gammas, atol=1e-12)
    assert row.gamma(2) == -(n - 1) / n
    assert row.gamma(n) == -1 / n


def test_h_zero_row_by_telescoping():
    # with Δ_k = (ξ_k - ξ_{k-1})/√2, the best predictor of Δ_1 is an explicit average
    n = 6
    row = gamma_h_zero(n)
    assert row.residual() < 1e-15


def test_crossing():
    root = gamma4_crossing()
    assert root == pytest.approx(0.752281, abs=1e-6)
    _, g3, g4 = gamma4(root - 1e-6)
    assert g3 > g4
    _, g3, g4 = gamma4(root + 1e-6)
    assert g3 < g4


def test_crossing_needs_bracket():
    with pytest.raises(DomainError):
        gamma4_crossing(0.8, 0.9)


def test_h_one_rejected():
    with pytest.raises(SingularRegime):
        gamma3(1.0)
    with pytest.raises(SingularRegime):
        gamma4(1.0)


def test_h_half_rows_are_zero():
    assert gamma3(0.5) == (0.0, 0.0)
    assert gamma4(0.5) == (0.0, 0.0, 0.0)
