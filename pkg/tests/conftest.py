import json
from pathlib import Path

import mpmath
import pytest

DATA = Path(__file__).parent / "data"


@pytest.fixture(scope="session")
def golden_tables():
    """Published 5-decimal tables keyed by H string, then n string -> list of cell strings."""
    with open(DATA / "golden_tables.json") as fh:
        return json.load(fh)


def mp_rho(h, k, dps=50):
    """Autocovariance evaluated at ``dps`` digits; the reference for double-precision code."""
    with mpmath.workdps(dps):
        h2 = 2 * mpmath.mpf(h)
        k = mpmath.mpf(k)

        def p(x):
            return mpmath.mpf(0) if x == 0 else abs(x) ** h2

        return (p(k + 1) - 2 * p(k) + p(k - 1)) / 2


def mp_solve(h, n, dps=40):
    """Normal equations solved in extended precision."""
    with mpmath.workdps(dps):
        r = [mp_rho(h, k, dps) for k in range(n)]
        a = mpmath.matrix(n - 1, n - 1)
        for i in range(n - 1):
            for j in range(n - 1):
                a[i, j] = r[abs(i - j)]
        b = mpmath.matrix([r[l - 1] for l in range(2, n + 1)])
        return [float(v) for v in mpmath.lu_solve(a, b)]


# one line per acceptance criterion, repeated in the terminal summary
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
