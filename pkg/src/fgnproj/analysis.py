"""Numerical evidence for the conjectured sign and order patterns of the coefficients.

Also holds the auxiliary functions used to study the sign of ``Γ_4^3``:

    ψ(H, x) = (ρ(H, x) + ρ(H, x+2)) / ρ(H, x+1)
    η(H, y) = ((1+2y)^{2H} + (1-2y)^{2H} - 2) / ((1+y)^{2H} + (1-y)^{2H} - 2)

with ``ψ(H, x) = -2 + η(H, 1/(x+1))`` for ``x >= 1``, and the even power series
``η(H, y) = Σ_k b_k y^{2k}``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Iterable, Optional, Sequence

import numpy as np

from .covariance import (
    HurstLike,
    HurstParam,
    PropertyReport,
    Regime,
    as_hurst,
    autocov_seq,
    binomial_series_coeffs,
    rho_values,
)
from .errors import DegenerateC0, DomainError
from .recursion import CoefficientTriangle, coeff_triangle

__all__ = [
    "ConjectureReport",
    "DEFAULT_H_GRID",
    "verify_positivity",
    "verify_first_largest",
    "verify_column_monotonicity",
    "verify_row_nonmonotonicity",
    "check_posit2",
    "psi",
    "psi_tail",
    "eta",
    "eta_c_coeffs",
    "eta_b_coeffs",
    "b_closed_forms",
    "check_b_positivity",
    "psi_argmax",
    "row_is_decreasing",
]

DEFAULT_H_GRID = tuple(round(0.51 + 0.01 * i, 2) for i in range(49))
# below this y the power series is used for η; above it the direct quotient
_ETA_SERIES_BELOW = 0.25


@dataclass
class ConjectureReport:
    """Pass/fail evidence for one conjecture over a grid.

    ``counterexamples`` holds ``(h, n, k, value)`` tuples sorted by ``(h, n, k)``;
    ``min_margin`` is the smallest slack of the tested strict inequality, reported
    on success as well.  A ``descriptive`` report documents a pattern that is
    expected to fail somewhere and does not count as a failed check.
    """

    conjecture_id: str
    h_grid: list[float]
    n_max: int
    holds: bool
    counterexamples: list[tuple] = field(default_factory=list)
    min_margin: float = float("nan")
    descriptive: bool = False
    details: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.holds != (not self.counterexamples):
            raise ValueError("holds must be True exactly when there are no counterexamples")
        self.counterexamples.sort(key=lambda c: tuple(-1 if v is None else v for v in c[:3]))


def _long_range_grid(h_grid: Iterable[HurstLike]) -> list[HurstParam]:
    grid = [as_hurst(h) for h in h_grid]
    if not grid:
        raise DomainError("empty H grid")
    for hp in grid:
        if hp.regime is not Regime.LONG_RANGE:
            raise DomainError(f"conjecture checks need 1/2 < H < 1, got {hp.h}")
    return grid


def _triangles(h_grid, n_max: int) -> list[tuple[HurstParam, CoefficientTriangle]]:
    if int(n_max) != n_max or n_max < 2:
        raise DomainError("n_max must be an integer >= 2")
    return [(hp, coeff_triangle(hp, int(n_max))) for hp in _long_range_grid(h_grid)]


def _scan(conjecture_id: str, h_grid, n_max: int, margins_of, descriptive: bool = False,
          first_only_per_row: bool = False) -> ConjectureReport:
    # margins_of(triangle, m) -> (ks, margins) for row m; a margin <= 0 is a counterexample
    pairs = _triangles(h_grid, n_max)
    found = []
    worst = math.inf
    for hp, tri in pairs:
        for m in range(2, int(n_max) + 1):
            ks, margins = margins_of(tri, m)
            if margins.size == 0:
                continue
            worst = min(worst, float(margins.min()))
            bad = np.flatnonzero(~(margins > 0))
            if first_only_per_row:
                bad = bad[:1]
            found.extend((hp.h, m, int(ks[i]), float(margins[i])) for i in bad)
    return ConjectureReport(
        conjecture_id, [hp.h for hp, _ in pairs], int(n_max),
        not found, found, worst, descriptive,
    )


def verify_positivity(h_grid, n_max: int) -> ConjectureReport:
    """``Γ_n^k > 0`` for all ``2 <= k <= n <= n_max``."""
    def margins(tri, m):
        return np.arange(2, m + 1), tri.table[m, : m - 1]
    return _scan("positivity", h_grid, n_max, margins)


def verify_first_largest(h_grid, n_max: int) -> ConjectureReport:
    """``Γ_n^2 > Γ_n^k`` for ``3 <= k <= n``; margins are ``Γ_n^2 - Γ_n^k``."""
    def margins(tri, m):
        row = tri.table[m, : m - 1]
        return np.arange(3, m + 1), row[0] - row[1:]
    return _scan("first_largest", h_grid, n_max, margins)


def verify_column_monotonicity(h_grid, n_max: int) -> ConjectureReport:
    """``Γ_n^k > Γ_{n+1}^k``; a counterexample ``(h, n, k, v)`` refers to rows n and n+1."""
    def margins(tri, m):
        if m == tri.n_max:
            return np.empty(0, dtype=int), np.empty(0)
        return np.arange(2, m + 1), tri.table[m, : m - 1] - tri.table[m + 1, : m - 1]
    return _scan("column_monotonicity", h_grid, n_max, margins)


def verify_row_nonmonotonicity(h_grid, n_max: int) -> ConjectureReport:
    """Record every row that is not strictly decreasing in ``k``.

    A counterexample ``(h, n, k, v)`` names the first ``k`` with ``Γ_n^k <= Γ_n^{k+1}``
    and ``v = Γ_n^k - Γ_n^{k+1}``.  The decrease pattern is known to break for
    larger H, so the report is descriptive.
    """
    def margins(tri, m):
        row = tri.table[m, : m - 1]
        return np.arange(2, m), row[:-1] - row[1:]
    report = _scan("row_decrease", h_grid, n_max, margins, descriptive=True,
                   first_only_per_row=True)
    rows_total = len(report.h_grid) * max(int(n_max) - 2, 0)
    report.details["non_monotone_rows"] = len(report.counterexamples)
    report.details["rows_checked"] = rows_total
    return report


def row_is_decreasing(h: HurstLike, n: int) -> bool:
    row = coeff_triangle(h, n).table[n, : n - 1]
    return bool(np.all(np.diff(row) < 0))


def check_posit2(h: HurstLike) -> PropertyReport:
    """Sign of ``ρ_2 + ρ_2^2 - ρ_1^2 - ρ_1 ρ_3``, the factor deciding ``Γ_4^3 > 0``."""
    hp = as_hurst(h)
    if hp.regime is not Regime.LONG_RANGE:
        raise DomainError("posit2 is stated for 1/2 < H < 1")
    _, r1, r2, r3 = autocov_seq(hp, 3).values
    value = float(r2 + r2 * r2 - r1 * r1 - r1 * r3)
    ok = value > 0
    return PropertyReport("posit2", f"H={hp.h}", ok, None if ok else (hp.h, value, 0.0), value)


def _need_long_range(hp: HurstParam, allow_one: bool = False) -> None:
    ok = hp.regime is Regime.LONG_RANGE or (allow_one and hp.regime is Regime.DEGENERATE)
    if not ok:
        raise DomainError(f"defined here for 1/2 < H < 1, got H={hp.h}")


def psi(h: HurstLike, x: float) -> float:
    """``ψ(H, x)`` on ``[0, 1]``, the branch containing the ``|1-x|^{2H}`` term."""
    hp = as_hurst(h)
    _need_long_range(hp)
    if not 0.0 <= x <= 1.0:
        raise DomainError("psi is evaluated on [0, 1]; use psi_tail for x >= 1")
    r0, r1, r2 = rho_values(hp, np.array([x, x + 1.0, x + 2.0]))
    return float((r0 + r2) / r1)


def eta(h: HurstLike, y: float) -> float:
    """``η(H, y)`` for ``0 < y <= 1/2``.

    Small ``y`` goes through the power series, whose coefficients are all positive
    for ``H > 1/2``; the direct quotient would cancel to ``O(y^2)``.
    """
    hp = as_hurst(h)
    _need_long_range(hp, allow_one=True)
    if not 0.0 < y <= 0.5:
        raise DomainError("eta is defined for 0 < y <= 1/2")
    two_h = 2.0 * hp.h
    if y >= _ETA_SERIES_BELOW:
        num = (1 + 2 * y) ** two_h + (1 - 2 * y) ** two_h - 2.0
        den = (1 + y) ** two_h + (1 - y) ** two_h - 2.0
        return num / den
    # Σ c_k 4^{k+1} y^{2k} / Σ c_k y^{2k}
    y2 = y * y
    c = two_h * (two_h - 1.0)
    power = 1.0
    num = 4.0 * c
    den = c
    for k in range(1, 400):
        c *= (two_h - 2 * k) * (two_h - 2 * k - 1) / ((2 * k + 2) * (2 * k + 1))
        power *= y2
        t_den = c * power
        t_num = t_den * 4.0 ** (k + 1)
        num += t_num
        den += t_den
        if abs(t_num) <= 1e-18 * abs(num):
            break
    return num / den


def psi_tail(h: HurstLike, x: float) -> float:
    """``ψ(H, x)`` for ``x >= 1`` written as ``-2 + η(H, 1/(x+1))``."""
    if not x >= 1.0:
        raise DomainError("psi_tail is defined for x >= 1")
    return -2.0 + eta(h, 1.0 / (x + 1.0))


def eta_c_coeffs(h: HurstLike, k_max: int) -> np.ndarray:
    """``c_0, ..., c_{k_max}`` with ``c_k = 2 (2H)_{2k+2} / (2k+2)!`` (falling factorial)."""
    if k_max < 0:
        raise DomainError("k_max must be >= 0")
    return binomial_series_coeffs(as_hurst(h).h, int(k_max))


def eta_b_coeffs(h: HurstLike, k_max: int) -> np.ndarray:
    """Series coefficients of ``η`` by forward substitution in ``c * b = (4^{k+1} c_k)``."""
    c = eta_c_coeffs(h, k_max)
    if abs(c[0]) < 1e-300:
        raise DegenerateC0(f"c_0 = {c[0]} vanishes (H = 1/2)")
    b = np.empty(k_max + 1)
    for k in range(k_max + 1):
        acc = 4.0 ** (k + 1) * c[k]
        for l in range(1, k + 1):
            acc -= c[l] * b[k - l]
        b[k] = acc / c[0]
    return b


def b_closed_forms(h: HurstLike) -> tuple[float, float, float]:
    """Exact ``b_0, b_1, b_2``."""
    hv = as_hurst(h).h
    b1 = (2 * hv - 2) * (2 * hv - 3)
    b2 = (2 * hv - 2) * (2 * hv - 3) * (2 * hv * hv - 13 * hv + 17) / 6
    return 4.0, b1, b2


def check_b_positivity(h_grid, k_max: int = 50) -> ConjectureReport:
    """``b_k > 0`` for ``k <= k_max`` at each grid point; evidence only."""
    grid = _long_range_grid(h_grid)
    found = []
    worst = math.inf
    growth = {}
    for hp in grid:
        b = eta_b_coeffs(hp, k_max)
        growth[hp.h] = float(np.max(np.abs(b)))
        worst = min(worst, float(b.min()))
        found.extend((hp.h, None, int(k), float(b[k])) for k in np.flatnonzero(~(b > 0)))
    return ConjectureReport(
        "b_positive", [hp.h for hp in grid], int(k_max), not found, found, worst,
        details={"max_abs_b": growth},
    )


def psi_argmax(h: HurstLike, xs: Optional[Sequence[float]] = None) -> float:
    """Grid location of the largest ``ψ(H, x)`` on ``[0, 1]``."""
    xs = np.linspace(0.0, 1.0, 101) if xs is None else np.asarray(xs, dtype=float)
    values = [psi(h, float(x)) for x in xs]
    return float(xs[int(np.argmax(values))])
