"""Timing harness: one linear solve vs. one solve per row vs. the order recursion."""
from __future__ import annotations

import enum
import statistics
import time
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

import numpy as np
from threadpoolctl import threadpool_limits

from .covariance import HurstLike, as_hurst
from .recursion import coeff_triangle
from .toeplitz import solve_system

__all__ = ["Method", "BenchResult", "run_bench", "scaling_slope", "CHECKSUM_TOL"]

CHECKSUM_TOL = 1e-6


class Method(enum.Enum):
    SOLVE_LAST_ROW = "solve_last_row"
    SOLVE_WHOLE_TRIANGLE = "solve_whole_triangle"
    RECURRENCE = "recurrence"


@dataclass(frozen=True)
class BenchResult:
    method: Method
    n: int
    wall_time: float
    reps: int
    checksum: float
    h: float = 0.7


def _solve_last(h, n: int) -> float:
    return float(solve_system(h, n).gammas.sum())


def _solve_all(h, n: int) -> float:
    last = None
    for m in range(2, n + 1):
        last = solve_system(h, m)
    return float(last.gammas.sum())


def _recurrence(h, n: int) -> float:
    return float(coeff_triangle(h, n).row(n).gammas.sum())


_RUNNERS: dict[Method, Callable[[object, int], float]] = {
    Method.SOLVE_LAST_ROW: _solve_last,
    Method.SOLVE_WHOLE_TRIANGLE: _solve_all,
    Method.RECURRENCE: _recurrence,
}


def _median_time(fn, h, n: int, reps: int) -> tuple[float, float]:
    times = []
    checksum = float("nan")
    for _ in range(reps):
        t0 = time.perf_counter()
        checksum = fn(h, n)
        times.append(time.perf_counter() - t0)
    return statistics.median(times), checksum


def run_bench(h: HurstLike = 0.7, n_list: Iterable[int] = (100, 500, 1000, 2000),
              reps: int = 5, methods: Sequence[Method] = tuple(Method)) -> list[BenchResult]:
    """Median wall time over ``reps`` runs per (method, n), single-threaded.

    Each method is warmed up once on the smallest ``n`` (JIT compilation, BLAS
    initialisation) and that run is discarded.  Checksums (sum of the last row)
    must agree across methods before any timing is returned.
    """
    hp = as_hurst(h)
    sizes = sorted({int(n) for n in n_list})
    if not sizes or sizes[0] < 2:
        raise ValueError("n_list must contain integers >= 2")
    if reps < 3:
        raise ValueError("reps must be >= 3")
    results = []
    with threadpool_limits(limits=1):
        for method in methods:
            _RUNNERS[method](hp, sizes[0])
        for n in sizes:
            batch = []
            for method in methods:
                wall, checksum = _median_time(_RUNNERS[method], hp, n, reps)
                batch.append(BenchResult(method, n, wall, reps, checksum, hp.h))
            sums = [r.checksum for r in batch]
            if max(sums) - min(sums) > CHECKSUM_TOL:
                raise RuntimeError(f"methods disagree at n={n}: checksums {sums}")
            results.extend(batch)
    return results


def scaling_slope(results: Iterable[BenchResult], method: Method,
                  sizes: Iterable[int] | None = None) -> float:
    """Least-squares slope of log(time) against log(n)."""
    wanted = None if sizes is None else set(sizes)
    pts = [(r.n, r.wall_time) for r in results
           if r.method is method and (wanted is None or r.n in wanted)]
    if len(pts) < 2:
        raise ValueError("need at least two sizes to fit a slope")
    x = np.log([p[0] for p in pts])
    y = np.log([p[1] for p in pts])
    return float(np.polyfit(x, y, 1)[0])
