"""Shared oracles and strategies.

The oracles below deliberately avoid every code path in ``lefcert``: exact
rational evaluation of the map, cofactor determinants, Faddeev-LeVerrier
characteristic polynomials, and a scalar root-find for the fixed point.
"""
from __future__ import annotations

from fractions import Fraction
from itertools import permutations

import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st
from scipy.optimize import brentq

settings.register_profile(
    "default", max_examples=100, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")


def direct_map(gamma, x):
    """The map exactly as written: alpha * gamma_i / (1 - x_i), corners fixed."""
    x = list(x)
    if any(v == 1 for v in x):
        return [1 if v == 1 else 0 for v in x]
    w = [g / (1 - v) for g, v in zip(gamma, x)]
    s = sum(w)
    return [v / s for v in w]


def rational_map(gamma, x):
    return direct_map([Fraction(g) for g in gamma], [Fraction(v) for v in x])


def cofactor_det(M) -> float:
    M = [list(r) for r in M]
    n = len(M)
    if n == 1:
        return M[0][0]
    return sum(
        (-1) ** j * M[0][j] * cofactor_det([r[:j] + r[j + 1:] for r in M[1:]])
        for j in range(n)
        if M[0][j] != 0
    )


def charpoly(M) -> np.ndarray:
    """Coefficients of det(lambda I - M), highest degree first (Faddeev-LeVerrier)."""
    A = np.asarray(M, dtype=float)
    n = A.shape[0]
    coeffs = [1.0]
    Mk = np.zeros_like(A)
    for k in range(1, n + 1):
        Mk = A @ Mk + coeffs[-1] * np.eye(n)
        coeffs.append(-np.trace(A @ Mk) / k)
    return np.array(coeffs)


def charpoly_roots(M) -> np.ndarray:
    r = np.roots(charpoly(M))
    assert np.max(np.abs(r.imag)) < 1e-6
    return np.sort(r.real)


def _lower_root(z):
    # (1 - sqrt(1 - z)) / 2 without cancellation
    return z / (2.0 * (1.0 + np.sqrt(np.clip(1.0 - z, 0.0, None))))


def fixed_point_oracle(gamma) -> np.ndarray:
    """Solve x_i (1 - x_i) = gamma_i * a with sum x_i = 1 for the scalar a.

    Every coordinate takes the root below 1/2 except possibly the one with the
    largest weight, which takes the upper root when the lower branch cannot
    reach sum one; that branch is parametrized by u = 1 - x_top.
    """
    g = np.asarray(gamma, dtype=float)
    top = int(np.argmax(g))
    a_max = 1.0 / (4.0 * g[top])
    if _lower_root(4.0 * g * a_max).sum() >= 1.0:
        a = brentq(lambda a: _lower_root(4.0 * g * a).sum() - 1.0, 0.0, a_max, xtol=1e-300, rtol=1e-15)
        return _lower_root(4.0 * g * a)
    rest = np.delete(g, top)

    def h(u):
        a = u * (1.0 - u) / g[top]
        return _lower_root(4.0 * rest * a).sum() - u

    u = brentq(h, 1e-200, 0.5, xtol=1e-300, rtol=1e-15)
    a = u * (1.0 - u) / g[top]
    x = _lower_root(4.0 * g * a)
    x[top] = 1.0 - u
    return x


def all_permutations(n):
    return [list(p) for p in permutations(range(n))]


@st.composite
def admissible_gamma(draw, min_n=3, max_n=10):
    n = draw(st.integers(min_n, max_n))
    raw = draw(st.lists(st.floats(0.05, 1.0), min_size=n, max_size=n))
    g = np.asarray(raw) / sum(raw)
    if g.max() > 0.45:
        # contract toward uniform so the largest weight becomes 0.45
        lam = (0.45 - 1.0 / n) / (g.max() - 1.0 / n)
        g = lam * g + (1.0 - lam) / n
    return g / g.sum()


@st.composite
def simplex_points(draw, n, margin=0.0):
    raw = draw(st.lists(st.floats(0.0, 1.0), min_size=n, max_size=n).filter(lambda v: sum(v) > 1e-3))
    x = np.asarray(raw) / sum(raw)
    if margin > 0.0 and x.max() > 1.0 - margin:
        x = (1.0 - n * margin / (n - 1)) * x + margin / (n - 1)
        x = x / x.sum()
    return x


# acceptance-summary plumbing: criteria record a line, printed after the run
ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def criterion():
    def record(number: int, title: str, passed: bool, detail: str = ""):
        line = f"[criterion {number}] {'PASS' if passed else 'FAIL'}  {title}"
        if detail:
            line += f"  ({detail})"
        ACCEPTANCE_LINES.append(line)
        print(line)
        return passed

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
