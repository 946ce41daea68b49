"""Covariance matrix of fGn and the normal equations for the projection coefficients.

Projecting ``Δ_1`` onto ``Δ_2, ..., Δ_n`` gives ``E(Δ_1 | Δ_2..Δ_n) = Σ_k Γ_n^k Δ_k``
where the coefficients solve

    ρ_{l-1} = Σ_{k=2}^n Γ_n^k ρ_{|l-k|},   2 <= l <= n,

a symmetric positive definite Toeplitz system of order ``n - 1``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np
import scipy.linalg

from .covariance import (
    HurstLike,
    HurstParam,
    PropertyReport,
    Regime,
    as_hurst,
    autocov_seq,
)
from .errors import DomainError, FactorizationFailure, OrderTooLarge, SingularRegime

__all__ = [
    "SymToeplitz",
    "CoefficientRow",
    "LowerTriangular",
    "build_matrix",
    "covariance_matrix",
    "solve_system",
    "solve_cramer",
    "cholesky_factor",
    "cholesky_conjecture_checks",
    "CRAMER_MAX_N",
]

CRAMER_MAX_N = 13


def _check_order(n: int) -> int:
    if int(n) != n or n < 2:
        raise DomainError(f"projection order n must be an integer >= 2, got {n!r}")
    return int(n)


def _reject_degenerate(hp: HurstParam) -> None:
    if hp.regime is Regime.DEGENERATE:
        raise SingularRegime("H = 1 gives the all-ones covariance matrix")


@dataclass(frozen=True)
class SymToeplitz:
    """The ``(n-1) x (n-1)`` matrix ``A`` with entries ``ρ_{|i-j|}``; only the first row is kept."""

    h: HurstParam
    n: int
    first_row: np.ndarray

    @property
    def dim(self) -> int:
        return self.n - 1

    def entry(self, i: int, j: int) -> float:
        """Entry at 1-based position (i, j)."""
        return float(self.first_row[abs(i - j)])

    def dense(self) -> np.ndarray:
        return scipy.linalg.toeplitz(self.first_row)


@dataclass(frozen=True)
class CoefficientRow:
    """Coefficients ``Γ_n^2, ..., Γ_n^n`` (``gammas[0]`` is ``Γ_n^2``).

    ``stderr`` is only set for statistical estimates.
    """

    h: HurstParam
    n: int
    gammas: np.ndarray
    stderr: Optional[np.ndarray] = None

    def __post_init__(self) -> None:
        g = np.array(self.gammas, dtype=float)
        if g.shape != (self.n - 1,):
            raise DomainError(f"row n={self.n} needs {self.n - 1} coefficients, got {g.shape}")
        g.setflags(write=False)
        object.__setattr__(self, "gammas", g)

    def gamma(self, k: int) -> float:
        """``Γ_n^k`` for ``2 <= k <= n`` (k counts the increments, Δ_1 is the target)."""
        if not 2 <= k <= self.n:
            raise IndexError(f"k must lie in [2, {self.n}]")
        return float(self.gammas[k - 2])

    def residual(self) -> float:
        """``max_l |ρ_{l-1} - Σ_k Γ_n^k ρ_{|l-k|}|`` over ``2 <= l <= n``."""
        r = autocov_seq(self.h, self.n - 1).values
        a = scipy.linalg.toeplitz(r[: self.n - 1])
        return float(np.max(np.abs(r[1:] - a @ self.gammas)))

    def prediction_error_variance(self) -> float:
        """``1 - Σ_k Γ_n^k ρ_{k-1}`` = ``E(Δ_1 - E(Δ_1 | Δ_2..Δ_n))^2``."""
        r = autocov_seq(self.h, self.n - 1).values
        return float(1.0 - self.gammas @ r[1:])


@dataclass(frozen=True)
class LowerTriangular:
    """Cholesky factor ``L`` with ``A = L L^T`` and positive diagonal."""

    entries: np.ndarray

    @property
    def n_dim(self) -> int:
        return self.entries.shape[0]

    def reconstruction_residual(self, a: SymToeplitz) -> float:
        return float(np.max(np.abs(a.dense() - self.entries @ self.entries.T)))


def build_matrix(h: HurstLike, n: int) -> SymToeplitz:
    hp = as_hurst(h)
    n = _check_order(n)
    _reject_degenerate(hp)
    return SymToeplitz(hp, n, autocov_seq(hp, n - 2).values)


def covariance_matrix(h: HurstLike, dim: int) -> np.ndarray:
    """Dense covariance matrix of ``(Δ_1, ..., Δ_dim)``."""
    if dim < 1:
        raise DomainError("dimension must be positive")
    return scipy.linalg.toeplitz(autocov_seq(h, dim - 1).values)


def _cholesky_dense(a: np.ndarray) -> np.ndarray:
    try:
        low = scipy.linalg.cholesky(a, lower=True, check_finite=False)
    except np.linalg.LinAlgError as exc:
        raise FactorizationFailure(f"matrix of order {a.shape[0]} is not positive definite") from exc
    if not np.all(np.diag(low) > 0):
        raise FactorizationFailure("nonpositive pivot in Cholesky factor")
    return low


def cholesky_factor(a: SymToeplitz) -> LowerTriangular:
    low = _cholesky_dense(a.dense())
    low.setflags(write=False)
    return LowerTriangular(low)


def solve_system(h: HurstLike, n: int) -> CoefficientRow:
    """Solve the normal equations by Cholesky factorisation and two triangular solves."""
    hp = as_hurst(h)
    n = _check_order(n)
    _reject_degenerate(hp)
    r = autocov_seq(hp, n - 1).values
    low = _cholesky_dense(scipy.linalg.toeplitz(r[: n - 1]))
    w = scipy.linalg.solve_triangular(low, r[1:], lower=True, check_finite=False)
    gammas = scipy.linalg.solve_triangular(low, w, lower=True, trans="T", check_finite=False)
    return CoefficientRow(hp, n, gammas)


def solve_cramer(h: HurstLike, n: int) -> CoefficientRow:
    """``Γ_n^k = det A_k / det A`` with ``A_k`` = ``A`` whose column ``k-1`` is the right-hand side.

    Determinants come from LU elimination, so each costs O(n^3).
    """
    hp = as_hurst(h)
    n = _check_order(n)
    if n > CRAMER_MAX_N:
        raise OrderTooLarge(f"Cramer's rule is limited to n <= {CRAMER_MAX_N}, got {n}")
    _reject_degenerate(hp)
    r = autocov_seq(hp, n - 1).values
    a = scipy.linalg.toeplitz(r[: n - 1])
    rhs = r[1:]
    det_a = np.linalg.det(a)
    gammas = np.empty(n - 1)
    for col in range(n - 1):
        a_k = a.copy()
        a_k[:, col] = rhs
        gammas[col] = np.linalg.det(a_k) / det_a
    return CoefficientRow(hp, n, gammas)


def _nonincreasing_report(seq: np.ndarray, label) -> tuple[Optional[tuple], float]:
    steps = seq[:-1] - seq[1:]
    if steps.size == 0:
        return None, float("inf")
    bad = np.flatnonzero(steps < 0)
    violation = None
    if bad.size:
        i = int(bad[0])
        violation = (label(i), float(seq[i]), float(seq[i + 1]))
    return violation, float(steps.min())


def cholesky_conjecture_checks(l: LowerTriangular) -> list[PropertyReport]:
    """Positivity of ``L``, a nonincreasing main diagonal, and nonincreasing subdiagonals.

    Subdiagonal ``d`` is the sequence ``L[i+d, i]`` for increasing ``i``.  Each
    diagonal's observed trend is stored in ``details["directions"]`` of the third
    report; violations are reported, never raised.
    """
    low = np.asarray(l.entries)
    dim = low.shape[0]
    tri = np.tril_indices(dim)
    vals = low[tri]
    neg = np.flatnonzero(vals < 0)
    pos_violation = None
    if neg.size:
        i = int(neg[0])
        pos_violation = ((int(tri[0][i]) + 1, int(tri[1][i]) + 1), float(vals[i]), 0.0)
    positivity = PropertyReport(
        "cholesky_entries_nonnegative", f"1 <= j <= i <= {dim}",
        pos_violation is None, pos_violation, float(vals.min()),
    )

    diag = np.diag(low)
    violation, slack = _nonincreasing_report(diag, lambda i: (i + 1, i + 2))
    main = PropertyReport(
        "cholesky_main_diagonal_nonincreasing", f"i=1..{dim}",
        violation is None, violation, slack,
    )

    directions: dict[int, str] = {}
    first = None
    worst = float("inf")
    for d in range(1, dim - 1):
        seq = np.diagonal(low, offset=-d)
        steps = seq[:-1] - seq[1:]
        if np.all(steps >= 0):
            directions[d] = "nonincreasing"
        elif np.all(steps <= 0):
            directions[d] = "nondecreasing"
        else:
            directions[d] = "non-monotone"
        worst = min(worst, float(steps.min()))
        if first is None:
            bad = np.flatnonzero(steps < 0)
            if bad.size:
                i = int(bad[0])
                # 1-based (row, col) of the earlier entry, the diagonal offset, then the pair
                first = ((i + d + 1, i + 1, d), float(seq[i]), float(seq[i + 1]))
    all_diag = PropertyReport(
        "cholesky_subdiagonals_nonincreasing", f"d=1..{max(dim - 2, 0)}",
        first is None, first, worst, {"directions": directions},
    )
    return [positivity, main, all_diag]
