import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import mp_rho
from fgnproj import (
    AutocovSeq,
    DomainError,
    HurstParam,
    NotApplicable,
    OrderTooHigh,
    PropertyReport,
    Regime,
    autocov_seq,
    binomial_series_coeffs,
    check_complete_monotonicity,
    check_identity_r1r2r3,
    check_rho_properties,
    rho,
    rho_cont,
    rho_values,
)

hursts = st.floats(min_value=0.0, max_value=1.0, allow_nan=False)
long_range = st.floats(min_value=0.501, max_value=0.999)
short_range = st.floats(min_value=0.001, max_value=0.499)


@pytest.mark.parametrize("h", [0.0, 0.1, 0.3, 0.49, 0.51, 0.7, 0.9, 0.99, 1.0])
@pytest.mark.parametrize("k", [1, 2, 3, 7, 50, 999, 2000])
def test_rho_matches_high_precision(h, k):
    want = float(mp_rho(h, k))
    got = rho(h, k)
    assert got == pytest.approx(want, rel=1e-13, abs=1e-300)


def test_rho_relative_accuracy_near_half():
    # the naive second difference loses ~8 digits here; the sum must not
    for k in (10, 100, 1000, 5000):
        want = float(mp_rho(0.51, k))
        assert abs(rho(0.51, k) - want) <= 1e-12 * abs(want)


@pytest.mark.parametrize("h,expected", [
    (0.5, [1.0, 0.0, 0.0, 0.0]),
    (1.0, [1.0, 1.0, 1.0, 1.0]),
    (0.0, [1.0, -0.5, 0.0, 0.0]),
])
def test_rho_special_values(h, expected):
    np.testing.assert_array_equal(autocov_seq(h, 3).values, expected)


def test_rho_zero_is_positive_zero_at_h0():
    assert math.copysign(1.0, rho(0.0, 5)) == 1.0


@given(long_range, st.integers(1, 500))
def test_rho_bounded_above_half(h, k):
    assert 0 < rho(h, k) < 1


@given(hursts)
def test_rho_one_closed_form(h):
    assert rho(h, 1) == pytest.approx(2 ** (2 * h - 1) - 1, abs=4e-16)


def test_rho_two_at_0_6():
    want = 0.5 * (3 ** 1.2 - 2 ** 2.2 + 1)
    np.testing.assert_allclose(autocov_seq(0.6, 2).values, [1.0, 2 ** 0.2 - 1, want], rtol=1e-14)
    assert autocov_seq(0.6, 2).values[2] == pytest.approx(0.0712, abs=5e-5)


@pytest.mark.parametrize("k", [-1, 1.5])
def test_rho_rejects_bad_lag(k):
    with pytest.raises(DomainError):
        rho(0.7, k)


@given(short_range, st.integers(1, 500))
def test_rho_negative_below_half(h, k):
    assert -0.5 <= rho(h, k) < 0


@given(hursts)
def test_rho_zero_lag_is_one(h):
    assert rho(h, 0) == 1.0


@given(long_range, st.floats(min_value=2.0, max_value=1e4))
def test_rho_cont_agrees_with_direct_formula(h, x):
    # the direct second difference is accurate to ~eps * x^2H / |rho|
    direct = 0.5 * ((x + 1) ** (2 * h) - 2 * x ** (2 * h) + (x - 1) ** (2 * h))
    tol = 1e-15 * x ** (2 * h) * 8 / abs(direct)
    assert rho_cont(h, x) == pytest.approx(direct, rel=max(tol, 1e-13))


@given(long_range)
def test_rho_decays_like_power(h):
    # rho_k ~ H(2H-1) k^{2H-2}
    k = 10_000.0
    assert rho_cont(h, k) == pytest.approx(h * (2 * h - 1) * k ** (2 * h - 2), rel=1e-6)


def test_series_coefficients_small_h_closed_form():
    h = 0.7
    c = binomial_series_coeffs(h, 2)
    a = 2 * h
    assert c[0] == pytest.approx(a * (a - 1))
    assert c[1] == pytest.approx(2 * a * (a - 1) * (a - 2) * (a - 3) / 24)


def test_rho_values_vectorised_matches_scalar():
    xs = np.array([0.0, 0.3, 1.0, 1.5, 2.0, 17.25])
    np.testing.assert_array_equal(rho_values(0.8, xs), [rho_cont(0.8, x) for x in xs])


class TestHurstParam:
    @pytest.mark.parametrize("h,regime", [
        (0.0, Regime.ZERO), (0.3, Regime.SHORT_RANGE), (0.5, Regime.INDEPENDENT),
        (0.7, Regime.LONG_RANGE), (1.0, Regime.DEGENERATE),
    ])
    def test_regimes(self, h, regime):
        assert HurstParam(h).regime is regime

    @pytest.mark.parametrize("bad", [-0.01, 1.01, float("nan"), float("inf")])
    def test_rejects_out_of_range(self, bad):
        with pytest.raises(DomainError):
            HurstParam(bad)

    def test_autocov_seq_needs_unit_lag_zero(self):
        with pytest.raises(ValueError):
            AutocovSeq(HurstParam(0.7), np.array([0.9, 0.1]))

    def test_autocov_seq_read_only(self):
        seq = autocov_seq(0.7, 4)
        with pytest.raises(ValueError):
            seq.values[1] = 0.0


@pytest.mark.parametrize("h", np.linspace(0.0, 1.0, 21).tolist())
def test_identity_r1r2r3(h):
    report = check_identity_r1r2r3(h)
    assert report.holds, report
    assert report.max_slack <= 1e-12


@pytest.mark.parametrize("h", [0.51, 0.6, 0.75, 0.9, 0.99])
def test_long_range_properties(h):
    reports = check_rho_properties(h, 1000)
    names = {r.property_name for r in reports}
    assert {"monotonicity_positivity", "convexity", "log_convexity", "rho1_sq_lt_rho3"} <= names
    for rep in reports:
        assert rep.holds, rep
        assert rep.max_slack > 0


@pytest.mark.parametrize("h", [0.01, 0.1, 0.25, 0.4, 0.49])
def test_short_range_properties(h):
    reports = check_rho_properties(h, 1000)
    assert {r.property_name for r in reports} == {"negativity_increase", "concavity", "log_convexity"}
    for rep in reports:
        assert rep.holds, rep


@pytest.mark.parametrize("h", [0.0, 0.5, 1.0])
def test_properties_not_applicable(h):
    with pytest.raises(NotApplicable):
        check_rho_properties(h, 10)
    with pytest.raises(NotApplicable):
        check_complete_monotonicity(h)


@pytest.mark.parametrize("h", [0.3, 0.55, 0.8, 0.95])
def test_complete_monotonicity(h):
    assert check_complete_monotonicity(h, 8, 200).holds


def test_complete_monotonicity_order_limit():
    with pytest.raises(OrderTooHigh):
        check_complete_monotonicity(0.7, 13)


def test_property_report_consistency_enforced():
    with pytest.raises(ValueError):
        PropertyReport("x", "k=1", True, (1, 0.0, 0.0), 0.0)
    with pytest.raises(ValueError):
        PropertyReport("x", "k=1", False, None, 0.0)
