"""Explicit coefficient formulas for n = 3 and n = 4, their H -> 1 limits and the H = 0 row."""
from __future__ import annotations

from math import log

import numpy as np

from .covariance import HurstLike, Regime, as_hurst, autocov_seq
from .errors import DomainError, SingularRegime
from .toeplitz import CoefficientRow

__all__ = [
    "gamma3",
    "gamma4",
    "gamma4_full_polynomial",
    "gamma4_denominator_split",
    "limits_n3",
    "limits_n4",
    "gamma_h_zero",
    "gamma4_crossing",
]


def _rhos(h: HurstLike):
    hp = as_hurst(h)
    if hp.regime is Regime.DEGENERATE:
        raise SingularRegime("closed forms divide by zero at H = 1")
    _, r1, r2, r3 = (float(v) for v in autocov_seq(hp, 3).values)
    return r1, r2, r3


def gamma3(h: HurstLike) -> tuple[float, float]:
    r1, r2, _ = _rhos(h)
    den = 1.0 - r1 * r1
    return r1 * (1.0 - r2) / den, (r2 - r1 * r1) / den


def gamma4_denominator_split(h: HurstLike) -> tuple[float, float]:
    """The two summands ``(1-ρ_2)(1-ρ_1^2)`` and ``(1-ρ_2)(ρ_2-ρ_1^2)`` of the n = 4 determinant.

    Both are positive for ``1/2 < H < 1``.
    """
    r1, r2, _ = _rhos(h)
    return (1.0 - r2) * (1.0 - r1 * r1), (1.0 - r2) * (r2 - r1 * r1)


def gamma4(h: HurstLike) -> tuple[float, float, float]:
    """``(Γ_4^2, Γ_4^3, Γ_4^4)``; the middle numerator is evaluated in factored form."""
    r1, r2, r3 = _rhos(h)
    den = 1.0 + 2.0 * r1 * r1 * r2 - r2 * r2 - 2.0 * r1 * r1
    g2 = (r1 + r1 * r1 * r3 + r1 * r2 * r2 - r2 * r3 - r1 ** 3 - r1 * r2) / den
    g3 = (1.0 - r2) * (r2 + r2 * r2 - r1 * r1 - r1 * r3) / den
    g4 = (r1 ** 3 + r1 * r2 * r2 - 2.0 * r1 * r2 + r3 - r1 * r1 * r3) / den
    return g2, g3, g4


def gamma4_full_polynomial(h: HurstLike) -> float:
    """``Γ_4^3`` from the expanded numerator, kept as a cross-check of :func:`gamma4`."""
    r1, r2, r3 = _rhos(h)
    den = 1.0 + 2.0 * r1 * r1 * r2 - r2 * r2 - 2.0 * r1 * r1
    num = r1 * r1 * r2 - r2 ** 3 + r1 * r2 * r3 - r1 * r1 + r2 - r1 * r3
    return num / den


def limits_n3() -> tuple[float, float]:
    """Limits of ``(Γ_3^2, Γ_3^3)`` as ``H -> 1``."""
    base = 8 * log(4)
    return (9 * log(9) - 8 * log(4)) / base, (8 * log(16) - 9 * log(9)) / base


def limits_n4() -> tuple[float, float, float]:
    """Limits of ``(Γ_4^2, Γ_4^3, Γ_4^4)`` as ``H -> 1``."""
    l2, l4, l6, l9, l12, l18 = (log(v) for v in (2, 4, 6, 9, 12, 18))
    den = 96 * l12 ** 2 - 640 * l2 ** 2 - 51 * l9 ** 2
    g2 = (531 * l4 ** 2 + 72 * l6 ** 2 + 51 * l9 ** 2 - 384 * l12 ** 2 + 108 * l18 ** 2) / den
    g3 = (48 * l2 - 15 * l9) / (16 * l2 - 3 * l9)
    g4 = (108 * l18 ** 2 - 364 * l2 ** 2 - 216 * l2 * l9 - 81 * l9 ** 2) / den
    return g2, g3, g4


def gamma_h_zero(n: int) -> CoefficientRow:
    """Exact row for ``H = 0``: ``Γ_n^k = -(n-k+1)/n``.

    At ``H = 0`` the increments are ``(ξ_k - ξ_{k-1})/√2`` with i.i.d. ``ξ``, so
    neighbours are negatively correlated (``ρ_1 = -1/2``) and every coefficient
    is negative.
    """
    if int(n) != n or n < 2:
        raise DomainError("n must be an integer >= 2")
    n = int(n)
    k = np.arange(2, n + 1)
    return CoefficientRow(as_hurst(0.0), n, -(n - k + 1) / n)


def gamma4_crossing(lo: float = 0.51, hi: float = 0.99, tol: float = 1e-13) -> float:
    """Bisection for the Hurst index where ``Γ_4^3 = Γ_4^4``.

    Below the root ``Γ_4^3 > Γ_4^4``, above it the order flips.
    """
    def gap(h: float) -> float:
        _, g3, g4 = gamma4(h)
        return g3 - g4

    f_lo, f_hi = gap(lo), gap(hi)
    if not (f_lo > 0 > f_hi):
        raise DomainError(f"no sign change of Γ_4^3 - Γ_4^4 on [{lo}, {hi}]")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if gap(mid) > 0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)
