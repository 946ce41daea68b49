"""Monte-Carlo cross-check: simulate fGn exactly and regress Δ_1 on its successors.

For a centred Gaussian vector the conditional expectation is linear, so ordinary
least squares of ``Δ_1`` on ``(Δ_2, ..., Δ_n)`` across independent paths is a
consistent estimator of the projection coefficients, independent of any
linear-system solver used elsewhere in the package.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg
from scipy.special import ndtri

from .covariance import HurstLike, HurstParam, Regime, as_hurst
from .errors import DomainError, IllConditioned, SingularRegime
from .toeplitz import CoefficientRow, _cholesky_dense, covariance_matrix

__all__ = ["SamplePaths", "simulate_fgn", "estimate_coeffs_ols", "GENERATOR_ID"]

# Philox4x64 counter stream, uniforms on (0, 1) mapped through the normal quantile
GENERATOR_ID = "philox4x64/ndtri"


@dataclass(frozen=True)
class SamplePaths:
    h: HurstParam
    n: int
    paths: int
    seed: int
    data: np.ndarray
    generator: str = GENERATOR_ID


def _normals(seed: int, shape: tuple[int, int]) -> np.ndarray:
    rng = np.random.Generator(np.random.Philox(seed))
    u = rng.random(shape)
    u += 2.0 ** -54  # random() is on [0, 1) in steps of 2^-53; shift onto (0, 1)
    return ndtri(u)


def simulate_fgn(h: HurstLike, n: int, paths: int, seed: int) -> SamplePaths:
    """Draw ``paths`` independent copies of ``(Δ_1, ..., Δ_n)`` as ``L z``.

    Exactly ``paths * n`` uniforms are consumed, row by row.
    """
    hp = as_hurst(h)
    if hp.regime is Regime.DEGENERATE:
        raise SingularRegime("H = 1 has a singular covariance matrix")
    if n < 2 or paths < 1:
        raise DomainError("need n >= 2 and paths >= 1")
    seed = int(seed) & (2 ** 64 - 1)
    low = _cholesky_dense(covariance_matrix(hp, int(n)))
    z = _normals(seed, (int(paths), int(n)))
    data = z @ low.T
    data.setflags(write=False)
    return SamplePaths(hp, int(n), int(paths), seed, data)


def estimate_coeffs_ols(samples: SamplePaths) -> CoefficientRow:
    """OLS of ``Δ_1`` on ``Δ_2..Δ_n`` without intercept; standard errors in ``stderr``."""
    n, count = samples.n, samples.paths
    if count < 10 * n:
        raise DomainError(f"need at least {10 * n} paths for n={n}, got {count}")
    x = samples.data[:, 1:]
    y = samples.data[:, 0]
    gram = x.T @ x / count
    try:
        low = scipy.linalg.cholesky(gram, lower=True, check_finite=False)
    except np.linalg.LinAlgError as exc:
        raise IllConditioned("sample Gram matrix is not positive definite") from exc
    if np.min(np.diag(low)) ** 2 < 1e-10:
        raise IllConditioned("sample Gram matrix pivot below 1e-10")
    beta = scipy.linalg.cho_solve((low, True), x.T @ y / count)
    resid = y - x @ beta
    sigma2 = resid @ resid / (count - (n - 1))
    inv_diag = np.diag(scipy.linalg.cho_solve((low, True), np.eye(n - 1)))
    stderr = np.sqrt(sigma2 * inv_diag / count)
    return CoefficientRow(samples.h, n, beta, stderr)
