"""Autocovariance of fractional Gaussian noise and its analytic properties.

The increments ``Δ_k = B^H_k - B^H_{k-1}`` of fractional Brownian motion form a
stationary Gaussian sequence with unit variance and autocovariance

    ρ_k = ½ (|k+1|^{2H} - 2|k|^{2H} + |k-1|^{2H}),   ρ_0 = 1.

For ``x >= 2`` the literal second difference loses up to ~7 digits near
``H = 1/2`` (three numbers of size ``x^{2H}`` cancel down to ``~x^{2H-2}``).
There the value is computed from the even binomial series

    (1+y)^{2H} + (1-y)^{2H} - 2 = Σ_j c_j y^{2j+2},   y = 1/x,

whose terms all share one sign, so no cancellation occurs.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Any, Optional, Union

import numpy as np
from numba import njit

from .errors import DomainError, NotApplicable, OrderTooHigh

__all__ = [
    "Regime",
    "HurstParam",
    "AutocovSeq",
    "PropertyReport",
    "as_hurst",
    "rho",
    "rho_cont",
    "rho_values",
    "autocov_seq",
    "binomial_series_coeffs",
    "check_identity_r1r2r3",
    "check_rho_properties",
    "check_complete_monotonicity",
    "CM_DEFAULT_ORDER",
]

CM_DEFAULT_ORDER = 8
CM_MAX_ORDER = 12
_SERIES_FROM = 2.0
_SERIES_MAX_TERMS = 400


class Regime(enum.Enum):
    ZERO = "zero"
    SHORT_RANGE = "short_range"
    INDEPENDENT = "independent"
    LONG_RANGE = "long_range"
    DEGENERATE = "degenerate"


@dataclass(frozen=True)
class HurstParam:
    """Hurst index on the closed interval [0, 1]."""

    h: float

    def __post_init__(self) -> None:
        try:
            value = float(self.h)
        except (TypeError, ValueError) as exc:
            raise DomainError(f"Hurst index must be a real number, got {self.h!r}") from exc
        if not math.isfinite(value) or not 0.0 <= value <= 1.0:
            raise DomainError(f"Hurst index must lie in [0, 1], got {self.h!r}")
        object.__setattr__(self, "h", value)

    @property
    def regime(self) -> Regime:
        h = self.h
        if h == 0.0:
            return Regime.ZERO
        if h < 0.5:
            return Regime.SHORT_RANGE
        if h == 0.5:
            return Regime.INDEPENDENT
        if h < 1.0:
            return Regime.LONG_RANGE
        return Regime.DEGENERATE

    def __float__(self) -> float:
        return self.h


HurstLike = Union[HurstParam, float]


def as_hurst(h: HurstLike) -> HurstParam:
    """Coerce a float (or an existing :class:`HurstParam`) to a validated :class:`HurstParam`."""
    return h if isinstance(h, HurstParam) else HurstParam(h)


@dataclass(frozen=True)
class AutocovSeq:
    """The autocovariances ``ρ_0, ..., ρ_m`` for one Hurst index."""

    h: HurstParam
    values: np.ndarray

    def __post_init__(self) -> None:
        values = np.array(self.values, dtype=float)
        if values.ndim != 1 or values.size == 0:
            raise DomainError("autocovariance sequence must be a non-empty 1-d array")
        if values[0] != 1.0:
            raise DomainError("rho_0 must equal 1")
        if not np.all(np.isfinite(values)):
            raise DomainError("autocovariances must be finite")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @property
    def m(self) -> int:
        return self.values.size - 1

    def __len__(self) -> int:
        return self.values.size

    def __getitem__(self, k):
        return self.values[k]


@dataclass
class PropertyReport:
    """Outcome of one finite numerical check.

    ``max_slack`` holds the smallest margin observed (for strict inequalities the
    smallest value of ``lhs - rhs``); for identity checks it is the residual.
    ``first_violation`` is ``(index, lhs, rhs)`` of the first failing case.
    """

    property_name: str
    checked_range: str
    holds: bool
    first_violation: Optional[tuple] = None
    max_slack: float = float("nan")
    details: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.holds != (self.first_violation is None):
            raise ValueError("holds must be True exactly when there is no violation")


def binomial_series_coeffs(h: float, k_max: int) -> np.ndarray:
    """Coefficients ``c_0..c_{k_max}`` of ``(1+y)^{2H} + (1-y)^{2H} - 2 = Σ c_k y^{2k+2}``.

    Uses the product recurrence ``c_k = c_{k-1} (2H-2k)(2H-2k-1) / ((2k+2)(2k+1))``
    starting from ``c_0 = 2H(2H-1)``, which never forms a factorial.
    """
    two_h = 2.0 * float(h)
    c = np.empty(k_max + 1)
    c[0] = two_h * (two_h - 1.0)
    for k in range(1, k_max + 1):
        c[k] = c[k - 1] * (two_h - 2 * k) * (two_h - 2 * k - 1) / ((2 * k + 2) * (2 * k + 1))
    return c


def _abs_pow(x: np.ndarray, two_h: float) -> np.ndarray:
    # |0|^{2H} is the variance of B^H_0, i.e. 0, also for H = 0
    ax = np.abs(x)
    out = np.zeros_like(ax)
    nz = ax != 0.0
    out[nz] = ax[nz] ** two_h
    return out


@njit(cache=True)
def _series_tail(xs, two_h):
    # ρ(x) = ½ Σ_j c_j x^{2H-2-2j} for x >= 2; every term has the sign of c_0, so no cancellation
    out = np.empty_like(xs)
    c0 = two_h * (two_h - 1.0)
    for i in range(xs.size):
        x = xs[i]
        inv_sq = 1.0 / (x * x)
        scale = x ** (two_h - 2.0)
        c = c0
        total = c * scale
        for j in range(1, _SERIES_MAX_TERMS):
            c *= (two_h - 2 * j) * (two_h - 2 * j - 1) / ((2 * j + 2) * (2 * j + 1))
            scale *= inv_sq
            term = c * scale
            total += term
            if abs(term) <= 1e-18 * abs(total):
                break
        out[i] = 0.5 * total + 0.0  # no -0.0 when c_0 = 0
    return out


def rho_values(h: HurstLike, x) -> np.ndarray:
    """Vectorised ``ρ(H, x)`` for ``x >= 0`` (returns an array of the same shape)."""
    hp = as_hurst(h)
    x = np.asarray(x, dtype=float)
    if np.any(~np.isfinite(x)) or np.any(x < 0):
        raise DomainError("rho is defined for finite x >= 0")
    two_h = 2.0 * hp.h
    flat = x.reshape(-1)
    out = np.empty_like(flat)

    near = flat < _SERIES_FROM
    if np.any(near):
        xs = flat[near]
        out[near] = 0.5 * (_abs_pow(xs + 1.0, two_h) - 2.0 * _abs_pow(xs, two_h) + _abs_pow(xs - 1.0, two_h))

    far = ~near
    if np.any(far):
        out[far] = _series_tail(flat[far], two_h)

    out[flat == 0.0] = 1.0
    return out.reshape(x.shape)


def rho(h: HurstLike, k: int) -> float:
    """Autocovariance ``ρ_k = E Δ_1 Δ_{k+1}`` of unit-variance fGn."""
    if int(k) != k or k < 0:
        raise DomainError(f"lag must be a nonnegative integer, got {k!r}")
    return float(rho_values(h, np.array([float(k)]))[0])


def rho_cont(h: HurstLike, x: float) -> float:
    """Continuous extension ``ρ(H, x) = ½(|x+1|^{2H} - 2|x|^{2H} + |x-1|^{2H})``."""
    return float(rho_values(h, np.array([float(x)]))[0])


def autocov_seq(h: HurstLike, m: int) -> AutocovSeq:
    if int(m) != m or m < 0:
        raise DomainError(f"m must be a nonnegative integer, got {m!r}")
    hp = as_hurst(h)
    return AutocovSeq(hp, rho_values(hp, np.arange(int(m) + 1, dtype=float)))


def _strict_report(name: str, checked_range: str, ks: np.ndarray, margins: np.ndarray,
                   lhs: np.ndarray, rhs: np.ndarray) -> PropertyReport:
    bad = np.flatnonzero(~(margins > 0))
    violation = None
    if bad.size:
        i = bad[0]
        violation = (int(ks[i]), float(lhs[i]), float(rhs[i]))
    return PropertyReport(name, checked_range, violation is None, violation, float(np.min(margins)))


def check_identity_r1r2r3(h: HurstLike, tol: float = 1e-12) -> PropertyReport:
    """Check ``ρ_2 - ρ_1^2 = ½(ρ_1 - ρ_3)`` to absolute tolerance ``tol``."""
    if not tol > 0:
        raise DomainError("tol must be positive")
    r = autocov_seq(h, 3).values
    lhs = r[2] - r[1] ** 2
    rhs = 0.5 * (r[1] - r[3])
    residual = abs(lhs - rhs)
    ok = bool(residual <= tol)
    return PropertyReport(
        "identity_r1r2r3", "k=1..3", ok,
        None if ok else (2, float(lhs), float(rhs)),
        float(residual),
    )


def check_rho_properties(h: HurstLike, m: int) -> list[PropertyReport]:
    """Scan ``ρ_0..ρ_m`` for monotonicity, convexity and log-convexity.

    For ``1/2 < H < 1``: ``ρ_{k-1} > ρ_k > 0`` and convexity, log-convexity for
    ``k >= 1``, plus ``ρ_1^2 < ρ_3``.  For ``0 < H < 1/2`` the sequence is negative,
    increasing from ``k = 1`` on, concave and log-convex from ``k = 2`` on
    (``ρ_0 = 1`` does not belong to the negative branch).
    """
    hp = as_hurst(h)
    if hp.regime not in (Regime.SHORT_RANGE, Regime.LONG_RANGE):
        raise NotApplicable(f"rho properties are vacuous or degenerate at H={hp.h}")
    if int(m) != m or m < 3:
        raise DomainError("m must be an integer >= 3")
    r = autocov_seq(hp, m).values
    k = np.arange(1, m)          # interior indices with both neighbours
    prev, cur, nxt = r[k - 1], r[k], r[k + 1]
    reports = []
    if hp.regime is Regime.LONG_RANGE:
        ks = np.arange(1, m + 1)
        gap = r[ks - 1] - r[ks]
        reports.append(_strict_report(
            "monotonicity_positivity", f"k=1..{m}", ks,
            np.minimum(gap, r[ks]), r[ks - 1], r[ks]))
        reports.append(_strict_report(
            "convexity", f"k=1..{m - 1}", k,
            (prev - cur) - (cur - nxt), prev - cur, cur - nxt))
        reports.append(_strict_report(
            "log_convexity", f"k=1..{m - 1}", k,
            prev * nxt - cur * cur, prev * nxt, cur * cur))
        reports.append(_strict_report(
            "rho1_sq_lt_rho3", "k=1,3", np.array([3]),
            np.array([r[3] - r[1] ** 2]), np.array([r[3]]), np.array([r[1] ** 2])))
    else:
        ks = np.arange(1, m + 1)
        # k = 1 only asks ρ_1 < 0; from k = 2 on also ρ_{k-1} < ρ_k
        rise = np.full(m, np.inf)
        rise[1:] = r[2:] - r[1:-1]
        reports.append(_strict_report(
            "negativity_increase", f"k=1..{m}", ks,
            np.minimum(rise, -r[ks]), r[ks - 1], r[ks]))
        k2 = k[k >= 2]
        p2, c2, n2 = r[k2 - 1], r[k2], r[k2 + 1]
        reports.append(_strict_report(
            "concavity", f"k=2..{m - 1}", k2,
            (c2 - n2) - (p2 - c2), c2 - n2, p2 - c2))
        reports.append(_strict_report(
            "log_convexity", f"k=2..{m - 1}", k2,
            p2 * n2 - c2 * c2, p2 * n2, c2 * c2))
    return reports


def check_complete_monotonicity(h: HurstLike, max_order: int = CM_DEFAULT_ORDER,
                                m: int = 200) -> PropertyReport:
    """Discrete complete-monotonicity test on ``ρ_1, ..., ρ_m``.

    Checks ``(-1)^j (Δ^j ρ)_k >= -2^j 1e-12`` for ``0 <= j <= max_order`` and
    ``1 <= k <= m - j``, with ``(Δρ)_k = ρ_{k+1} - ρ_k``.  For ``H < 1/2`` the
    sequence ``-ρ`` is tested instead.  Forward differences stand in for
    derivatives, so this is a surrogate for the continuous statement.
    """
    hp = as_hurst(h)
    if hp.regime not in (Regime.SHORT_RANGE, Regime.LONG_RANGE):
        raise NotApplicable(f"complete monotonicity has no content at H={hp.h}")
    if max_order > CM_MAX_ORDER:
        raise OrderTooHigh(f"max_order={max_order} exceeds {CM_MAX_ORDER}")
    if max_order < 0 or m < max_order + 2:
        raise DomainError("need 0 <= max_order and m >= max_order + 2")
    sign = -1.0 if hp.h < 0.5 else 1.0
    seq = sign * autocov_seq(hp, m).values[1:]
    worst = math.inf
    violation = None
    diff = seq
    for j in range(max_order + 1):
        if j:
            diff = np.diff(diff)
        signed = (-1.0) ** j * diff
        tol = 2.0 ** j * 1e-12
        worst = min(worst, float(signed.min()))
        bad = np.flatnonzero(signed < -tol)
        if violation is None and bad.size:
            i = int(bad[0])
            violation = ((j, i + 1), float(signed[i]), -tol)
    target = "-rho" if sign < 0 else "rho"
    return PropertyReport(
        "complete_monotonicity",
        f"{target}, orders 0..{max_order}, k=1..{m}",
        violation is None, violation, worst,
    )
