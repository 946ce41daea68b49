"""Batteries of property and conjecture checks, flattened into uniform entries."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence, Union

import numpy as np

from . import analysis, covariance, toeplitz
from .covariance import PropertyReport, Regime, as_hurst
from .errors import NotApplicable

__all__ = ["SuiteEntry", "SUITES", "run_suite", "run_suites"]

SUITES = ("covariance", "conjectures", "cholesky", "psi")

Report = Union[PropertyReport, analysis.ConjectureReport]


@dataclass(frozen=True)
class SuiteEntry:
    suite: str
    check: str
    h: Optional[float]
    status: str            # pass | fail | not_applicable | finding
    margin: float
    counterexample: str = ""

    @property
    def failed(self) -> bool:
        return self.status == "fail"


def _entry(suite: str, h: Optional[float], report: Report) -> SuiteEntry:
    if isinstance(report, PropertyReport):
        name, ok, margin = report.property_name, report.holds, report.max_slack
        first = report.first_violation
    else:
        name, ok, margin = report.conjecture_id, report.holds, report.min_margin
        first = report.counterexamples[0] if report.counterexamples else None
        if report.descriptive:
            status = "finding" if not ok else "pass"
            return SuiteEntry(suite, name, h, status, margin, "" if first is None else repr(first))
    return SuiteEntry(suite, name, h, "pass" if ok else "fail", margin,
                      "" if first is None else repr(first))


def _skip(suite: str, check: str, h: float) -> SuiteEntry:
    return SuiteEntry(suite, check, h, "not_applicable", float("nan"))


def _covariance(grid, n_max: int, rho_m: int, cm_order: int, cm_m: int):
    for h in grid:
        hp = as_hurst(h)
        yield _entry("covariance", hp.h, covariance.check_identity_r1r2r3(hp, 1e-12))
        try:
            for rep in covariance.check_rho_properties(hp, max(rho_m, 3)):
                yield _entry("covariance", hp.h, rep)
        except NotApplicable:
            yield _skip("covariance", "rho_properties", hp.h)
        if hp.regime in (Regime.SHORT_RANGE, Regime.LONG_RANGE):
            yield _entry("covariance", hp.h,
                         covariance.check_complete_monotonicity(hp, cm_order, cm_m))
        else:
            yield _skip("covariance", "complete_monotonicity", hp.h)


def _split(grid):
    good = [h for h in grid if as_hurst(h).regime is Regime.LONG_RANGE]
    return good, [h for h in grid if h not in good]


def _conjectures(grid, n_max: int):
    good, rest = _split(grid)
    for h in rest:
        yield _skip("conjectures", "projection_conjectures", h)
    if not good:
        return
    for fn in (analysis.verify_positivity, analysis.verify_first_largest,
               analysis.verify_column_monotonicity, analysis.verify_row_nonmonotonicity):
        yield _entry("conjectures", None, fn(good, max(n_max, 2)))
    for h in good:
        yield _entry("conjectures", h, analysis.check_posit2(h))


def _cholesky(grid, n_max: int):
    good, rest = _split(grid)
    for h in rest:
        yield _skip("cholesky", "cholesky_conjectures", h)
    for h in good:
        a = toeplitz.build_matrix(h, max(n_max, 3))
        low = toeplitz.cholesky_factor(a)
        resid = low.reconstruction_residual(a)
        tol = 1e-10 * a.n
        ok = resid <= tol
        yield _entry("cholesky", h, PropertyReport(
            "cholesky_reconstruction", f"n={a.n}", ok,
            None if ok else ((a.n,), resid, tol), resid))
        for rep in toeplitz.cholesky_conjecture_checks(low):
            yield _entry("cholesky", h, rep)


def _strict_monotone(name: str, xs: np.ndarray, values: np.ndarray, increasing: bool) -> PropertyReport:
    steps = np.diff(values) if increasing else -np.diff(values)
    bad = np.flatnonzero(~(steps > 0))
    first = None
    if bad.size:
        i = int(bad[0])
        first = (float(xs[i]), float(values[i]), float(values[i + 1]))
    return PropertyReport(name, f"{xs[0]:g}..{xs[-1]:g} ({xs.size} points)",
                          first is None, first, float(steps.min()))


def _psi(grid, k_max: int):
    good, rest = _split(grid)
    for h in rest:
        yield _skip("psi", "psi_eta", h)
    ys = np.linspace(0.0, 0.5, 102)[1:]
    xs = np.linspace(1.0, 100.0, 101)
    for h in good:
        p0, p1 = analysis.psi(h, 0.0), analysis.psi(h, 1.0)
        ok = p0 > p1
        yield _entry("psi", h, PropertyReport(
            "psi_endpoints", "x=0,1", ok, None if ok else (h, p0, p1), p0 - p1,
            {"argmax": analysis.psi_argmax(h)}))
        yield _entry("psi", h, _strict_monotone(
            "eta_increasing", ys, np.array([analysis.eta(h, y) for y in ys]), True))
        yield _entry("psi", h, _strict_monotone(
            "psi_tail_decreasing", xs, np.array([analysis.psi_tail(h, x) for x in xs]), False))
        b = analysis.eta_b_coeffs(h, 2)
        dev = float(np.max(np.abs(b - np.array(analysis.b_closed_forms(h)))))
        ok = dev <= 1e-10
        yield _entry("psi", h, PropertyReport(
            "b_closed_forms", "k=0..2", ok, None if ok else ((2,), dev, 1e-10), dev))
    if good:
        yield _entry("psi", None, analysis.check_b_positivity(good, k_max))


def run_suite(name: str, h_grid: Sequence[float], n_max: int, *, rho_m: int = 1000,
              cm_order: int = covariance.CM_DEFAULT_ORDER, cm_m: int = 200,
              b_k_max: int = 50) -> list[SuiteEntry]:
    grid = [as_hurst(h).h for h in h_grid]
    if name == "covariance":
        return list(_covariance(grid, n_max, rho_m, cm_order, cm_m))
    if name == "conjectures":
        return list(_conjectures(grid, n_max))
    if name == "cholesky":
        return list(_cholesky(grid, n_max))
    if name == "psi":
        return list(_psi(grid, b_k_max))
    raise ValueError(f"unknown suite {name!r}")


def run_suites(names: Iterable[str], h_grid: Sequence[float], n_max: int, **kw) -> list[SuiteEntry]:
    out = []
    for name in names:
        out.extend(run_suite(name, h_grid, n_max, **kw))
    return out
