"""Projection coefficients of fractional Gaussian noise.

The coefficients ``Γ_n^k`` give the best linear predictor of the first
increment of fractional Brownian motion from the next ``n - 1`` increments,
``E(Δ_1 | Δ_2, ..., Δ_n) = Σ_{k=2}^n Γ_n^k Δ_k``.
"""
from .analysis import *  # noqa: F401,F403
from .bench import *  # noqa: F401,F403
from .closed_form import *  # noqa: F401,F403
from .covariance import *  # noqa: F401,F403
from .errors import *  # noqa: F401,F403
from .montecarlo import *  # noqa: F401,F403
from .recursion import *  # noqa: F401,F403
from .toeplitz import *  # noqa: F401,F403

__version__ = "0.1.0"
