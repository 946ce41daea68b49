import numpy as np
import pytest

from fgnproj import (
    GENERATOR_ID,
    DomainError,
    SingularRegime,
    autocov_seq,
    estimate_coeffs_ols,
    gamma_h_zero,
    simulate_fgn,
    solve_system,
)


def test_reproducible_and_seed_sensitive():
    a = simulate_fgn(0.7, 5, 100, seed=11)
    b = simulate_fgn(0.7, 5, 100, seed=11)
    c = simulate_fgn(0.7, 5, 100, seed=12)
    np.testing.assert_array_equal(a.data, b.data)
    assert not np.array_equal(a.data, c.data)
    assert a.generator == GENERATOR_ID
    assert a.data.shape == (100, 5)


def test_sample_covariance_matches_rho():
    s = simulate_fgn(0.8, 4, 200_000, seed=3)
    emp = s.data.T @ s.data / s.paths
    r = autocov_seq(0.8, 3).values
    want = np.array([[r[abs(i - j)] for j in range(4)] for i in range(4)])
    # entries of a Wishart average have sd <= sqrt(2 / paths) ~ 3.2e-3
    np.testing.assert_allclose(emp, want, atol=0.015)


@pytest.mark.parametrize("h,n", [(0.3, 3), (0.7, 4), (0.9, 5)])
def test_ols_recovers_coefficients(h, n):
    est = estimate_coeffs_ols(simulate_fgn(h, n, 200_000, seed=5))
    exact = solve_system(h, n).gammas
    z = np.abs(est.gammas - exact) / est.stderr
    assert np.all(z < 5), z


def test_h_zero_sign():
    est = estimate_coeffs_ols(simulate_fgn(0.0, 5, 100_000, seed=1))
    np.testing.assert_allclose(est.gammas, gamma_h_zero(5).gammas, atol=0.02)
    assert np.all(est.gammas < 0)


def test_errors():
    with pytest.raises(SingularRegime):
        simulate_fgn(1.0, 4, 10, seed=0)
    with pytest.raises(DomainError):
        simulate_fgn(0.7, 1, 10, seed=0)
    with pytest.raises(DomainError):
        estimate_coeffs_ols(simulate_fgn(0.7, 4, 39, seed=0))
