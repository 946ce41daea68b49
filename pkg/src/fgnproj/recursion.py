"""Order-recursive computation of the projection coefficients.

Starting from ``Γ_2^2 = ρ_1``, each row follows from the previous one:

    Γ_{n+1}^{n+1} = (ρ_n - Σ_k Γ_n^k ρ_{n+1-k}) / (1 - Σ_k Γ_n^k ρ_{k-1})
    Γ_{n+1}^k     = Γ_n^k - Γ_{n+1}^{n+1} Γ_n^{n-k+2},     2 <= k <= n.

The denominator is the prediction-error variance of the previous row.  One step
costs about ``3n`` multiply-adds, so the whole triangle up to ``n_max`` costs
``O(n_max^2)``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numba import njit

from .covariance import HurstLike, HurstParam, Regime, as_hurst, autocov_seq
from .errors import DegenerateDenominator, DomainError, SingularRegime
from .toeplitz import CoefficientRow

__all__ = ["CoefficientTriangle", "coeff_triangle", "last_row", "DENOMINATOR_FLOOR"]

DENOMINATOR_FLOOR = 1e-14


@njit(cache=True)
def _step(r, prev, m, out, floor):
    """Fill ``out[:m]`` (row m+1) from ``prev[:m-1]`` (row m); returns (denominator, ops)."""
    num = r[m]
    den = 1.0
    for j in range(m - 1):
        num -= prev[j] * r[m - 1 - j]
        den -= prev[j] * r[j + 1]
    if den <= floor:
        return den, 0
    last = num / den
    for j in range(m - 1):
        out[j] = prev[j] - last * prev[m - 2 - j]
    out[m - 1] = last
    return den, 3 * (m - 1) + 1


@njit(cache=True)
def _triangle_kernel(r, n_max, floor):
    # table[m, j] = Γ_m^{j+2}; rows 0 and 1 unused
    table = np.zeros((n_max + 1, n_max))
    dens = np.zeros(n_max + 1)
    table[2, 0] = r[1]
    ops = 0
    for m in range(2, n_max):
        den, cost = _step(r, table[m], m, table[m + 1], floor)
        dens[m] = den
        if cost == 0:
            return table, dens, ops, m
        ops += cost
    den = 1.0
    for j in range(n_max - 1):
        den -= table[n_max, j] * r[j + 1]
    dens[n_max] = den
    return table, dens, ops, -1


@njit(cache=True)
def _last_row_kernel(r, n, floor):
    a = np.zeros(n)
    b = np.zeros(n)
    a[0] = r[1]
    for m in range(2, n):
        den, cost = _step(r, a, m, b, floor)
        if cost == 0:
            return a, m, den
        a, b = b, a
    return a, -1, 1.0


def _validate(h: HurstLike, n: int) -> HurstParam:
    hp = as_hurst(h)
    if int(n) != n or n < 2:
        raise DomainError(f"order must be an integer >= 2, got {n!r}")
    if hp.regime is Regime.DEGENERATE:
        raise SingularRegime("H = 1 gives the all-ones covariance matrix")
    return hp


@dataclass(frozen=True)
class CoefficientTriangle:
    """All rows ``Γ_m^k`` for ``2 <= m <= n_max``.

    ``denominators[m]`` is ``1 - Σ_k Γ_m^k ρ_{k-1}``, the prediction-error variance
    of row ``m`` and the recursion denominator for the step to ``m + 1``.
    ``op_count`` counts the multiply-adds performed by the recursion.
    """

    h: HurstParam
    n_max: int
    table: np.ndarray
    denominators: np.ndarray
    op_count: int

    def row(self, m: int) -> CoefficientRow:
        if not 2 <= m <= self.n_max:
            raise IndexError(f"row {m} outside [2, {self.n_max}]")
        return CoefficientRow(self.h, m, self.table[m, : m - 1])

    __getitem__ = row

    @property
    def rows(self) -> dict[int, CoefficientRow]:
        return {m: self.row(m) for m in range(2, self.n_max + 1)}

    def update_identity_defect(self) -> float:
        """Max of ``|Γ_{m+1}^k + Γ_{m+1}^{m+1} Γ_m^{m-k+2} - Γ_m^k|`` over the stored triangle."""
        worst = 0.0
        for m in range(2, self.n_max):
            prev = self.table[m, : m - 1]
            new = self.table[m + 1, :m]
            lhs = new[:-1] + new[-1] * prev[::-1]
            worst = max(worst, float(np.max(np.abs(lhs - prev))))
        return worst


def coeff_triangle(h: HurstLike, n_max: int) -> CoefficientTriangle:
    hp = _validate(h, n_max)
    r = autocov_seq(hp, n_max).values
    table, dens, ops, failed = _triangle_kernel(r, int(n_max), DENOMINATOR_FLOOR)
    if failed >= 0:
        raise DegenerateDenominator(
            f"prediction-error variance {dens[failed]:.3e} at n={failed} (H={hp.h})")
    table.setflags(write=False)
    dens.setflags(write=False)
    return CoefficientTriangle(hp, int(n_max), table, dens, int(ops))


def last_row(h: HurstLike, n: int) -> CoefficientRow:
    """Row ``n`` of the triangle, keeping only two rows in memory."""
    hp = _validate(h, n)
    r = autocov_seq(hp, n).values
    row, failed, den = _last_row_kernel(r, int(n), DENOMINATOR_FLOOR)
    if failed >= 0:
        raise DegenerateDenominator(
            f"prediction-error variance {den:.3e} at n={failed} (H={hp.h})")
    return CoefficientRow(hp, int(n), row[: n - 1])
