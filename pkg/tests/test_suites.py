import math

from fgnproj.suites import SUITES, run_suite, run_suites


def test_all_pass_on_small_grid():
    entries = run_suites(SUITES, [0.55, 0.8], 30)
    assert entries
    assert not [e for e in entries if e.failed]
    assert {e.suite for e in entries} == set(SUITES)


def test_not_applicable_entries():
    entries = run_suite("covariance", [0.5], 10)
    statuses = {e.check: e.status for e in entries}
    assert statuses["identity_r1r2r3"] == "pass"
    assert statuses["rho_properties"] == "not_applicable"
    assert statuses["complete_monotonicity"] == "not_applicable"
    assert all(math.isnan(e.margin) for e in entries if e.status == "not_applicable")


def test_short_range_covariance_suite():
    entries = run_suite("covariance", [0.2], 50)
    assert all(e.status == "pass" for e in entries)


def test_row_decrease_is_a_finding_not_a_failure():
    entries = run_suite("conjectures", [0.9], 10)
    row = [e for e in entries if e.check == "row_decrease"][0]
    assert row.status == "finding" and not row.failed
    assert "(0.9, 4, 3" in row.counterexample


def test_conjecture_suites_skip_outside_long_range():
    for name in ("conjectures", "cholesky", "psi"):
        entries = run_suite(name, [0.3], 10)
        assert [e.status for e in entries] == ["not_applicable"]
