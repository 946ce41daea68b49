import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import mp_solve
from fgnproj import (
    CRAMER_MAX_N,
    DomainError,
    OrderTooLarge,
    SingularRegime,
    build_matrix,
    cholesky_conjecture_checks,
    cholesky_factor,
    covariance_matrix,
    solve_cramer,
    solve_system,
)
from fgnproj.toeplitz import LowerTriangular


@pytest.mark.parametrize("h", [0.1, 0.3, 0.51, 0.7, 0.9, 0.99])
@pytest.mark.parametrize("n", [2, 3, 5, 12, 30])
def test_solve_matches_extended_precision(h, n):
    want = mp_solve(h, n)
    np.testing.assert_allclose(solve_system(h, n).gammas, want, rtol=0, atol=1e-12)


@pytest.mark.parametrize("h", [0.2, 0.51, 0.8, 0.99])
@pytest.mark.parametrize("n", [2, 4, 9, CRAMER_MAX_N])
def test_cramer_matches_solve(h, n):
    np.testing.assert_allclose(solve_cramer(h, n).gammas, solve_system(h, n).gammas, atol=1e-12)


def test_n2_is_rho1():
    for h in (0.3, 0.6, 0.9):
        assert solve_system(h, 2).gamma(2) == pytest.approx(2 ** (2 * h - 1) - 1, abs=1e-15)


@given(st.floats(0.01, 0.99), st.integers(2, 60))
@settings(max_examples=60, deadline=None)
def test_normal_equations_residual(h, n):
    row = solve_system(h, n)
    assert row.residual() < 1e-12
    # projection can only reduce variance
    assert 0 < row.prediction_error_variance() <= 1.0


def test_independent_increments_give_zero_row():
    assert np.all(solve_system(0.5, 6).gammas == 0.0)


def test_matrix_structure():
    a = build_matrix(0.7, 5)
    assert a.dim == 4
    dense = a.dense()
    np.testing.assert_array_equal(dense, dense.T)
    assert a.entry(1, 3) == dense[0, 2] == a.first_row[2]
    np.testing.assert_array_equal(covariance_matrix(0.7, 4), dense)


def test_errors():
    with pytest.raises(SingularRegime):
        solve_system(1.0, 4)
    with pytest.raises(SingularRegime):
        solve_cramer(1.0, 4)
    with pytest.raises(OrderTooLarge):
        solve_cramer(0.7, CRAMER_MAX_N + 1)
    with pytest.raises(DomainError):
        solve_system(0.7, 1)
    with pytest.raises(DomainError):
        build_matrix(0.7, 2.5)


def test_row_indexing():
    row = solve_system(0.7, 4)
    assert row.gamma(2) == row.gammas[0]
    with pytest.raises(IndexError):
        row.gamma(5)
    with pytest.raises(IndexError):
        row.gamma(1)


@pytest.mark.parametrize("h", [0.51, 0.7, 0.99])
@pytest.mark.parametrize("n", [3, 50, 400])
def test_cholesky_conjectures_hold(h, n):
    a = build_matrix(h, n)
    low = cholesky_factor(a)
    assert low.n_dim == n - 1
    assert low.reconstruction_residual(a) < 1e-12
    reports = cholesky_conjecture_checks(low)
    assert [r.property_name for r in reports] == [
        "cholesky_entries_nonnegative",
        "cholesky_main_diagonal_nonincreasing",
        "cholesky_subdiagonals_nonincreasing",
    ]
    for rep in reports:
        assert rep.holds, rep
    assert set(reports[2].details["directions"].values()) <= {"nonincreasing"}


def test_cholesky_diagonal_matches_prediction_variances():
    # L_ii^2 is the innovation variance of the i-th increment given the earlier ones
    low = cholesky_factor(build_matrix(0.8, 8)).entries
    for i in range(1, 7):
        pev = solve_system(0.8, i + 1).prediction_error_variance()
        assert low[i, i] ** 2 == pytest.approx(pev, rel=1e-12)


def test_cholesky_checks_flag_violations():
    bad = LowerTriangular(np.array([[1.0, 0, 0, 0], [0.5, 0.8, 0, 0], [-0.1, 0.3, 0.9, 0],
                                    [0.2, 0.1, 0.4, 0.5]]))
    pos, main, sub = cholesky_conjecture_checks(bad)
    assert not pos.holds and pos.first_violation[0] == (3, 1)
    assert not main.holds and main.first_violation[0] == (2, 3)
    assert not sub.holds
    assert sub.details["directions"][1] == "non-monotone"
