"""Jacobians of the self-confidence map.

``full_jacobian`` is dF/dx of the map viewed as R^n -> R^n. The manifold
Jacobian eliminates x_n = 1 - sum(y) in the chart y_i = x_i (i < n), giving
dG/dy = J[:n-1, :n-1] - J[:n-1, n-1]. Because every column of J sums to zero,
the two matrices share their nonzero eigenvalues.
"""
from __future__ import annotations

from typing import Callable, Union

import numpy as np

from .dfmap import DfMap, product_form
from .errors import CornerPoint, NotAFixedPoint, StepTooLarge
from .simplex import DEFAULT_DELTA, SimplexPoint

FIXED_POINT_TOL = 1e-10


def _interior_coords(x: SimplexPoint, delta: float) -> np.ndarray:
    c = x.coords
    if np.max(c) > 1.0 - delta:
        raise CornerPoint(f"max coordinate {np.max(c)!r} exceeds 1 - delta = {1.0 - delta!r}")
    return c


def _jacobian_from_values(F: np.ndarray, x: np.ndarray) -> np.ndarray:
    inv = 1.0 / (1.0 - x)
    J = -np.outer(F, F * inv)
    np.fill_diagonal(J, F * (1.0 - F) * inv)
    return J


def full_jacobian(m: DfMap, x: SimplexPoint, delta: float = DEFAULT_DELTA) -> np.ndarray:
    """J_ii = F_i (1 - F_i) / (1 - x_i), J_ij = -F_i F_j / (1 - x_j)."""
    c = _interior_coords(x, delta)
    return _jacobian_from_values(product_form(m.gamma, c), c)


def reduced_jacobian(full: np.ndarray) -> np.ndarray:
    J = np.asarray(full, dtype=float)
    n = J.shape[0]
    lift = np.vstack([np.eye(n - 1), -np.ones((1, n - 1))])
    return J[: n - 1, :] @ lift


def fixed_point_jacobian(
    m: DfMap, xbar: SimplexPoint, delta: float = DEFAULT_DELTA, tol: float = FIXED_POINT_TOL
) -> np.ndarray:
    """Jacobian at a fixed point, where F = x gives J_ii = x_i, J_ij = -x_i x_j / (1 - x_j)."""
    c = _interior_coords(xbar, delta)
    residual = float(np.max(np.abs(product_form(m.gamma, c) - c)))
    if residual > tol:
        raise NotAFixedPoint(f"||F(x) - x||_inf = {residual:.3e} > {tol:.0e}")
    return _jacobian_from_values(c, c)


def column_sum_max_abs(J: np.ndarray) -> float:
    return float(np.max(np.abs(np.sum(J, axis=0))))


def finite_difference_jacobian(
    fn: Union[DfMap, Callable[[np.ndarray], np.ndarray]],
    x: SimplexPoint | np.ndarray,
    h: float = 1e-5,
) -> np.ndarray:
    """Central differences along the ambient coordinate axes.

    Perturbed points leave the simplex; ``fn`` is evaluated there through its
    analytic extension (``DfMap.ambient`` for the self-confidence map).
    """
    c = np.asarray(x, dtype=float)
    if np.max(c) + h >= 1.0:
        raise StepTooLarge(f"max coordinate {np.max(c)!r} + h = {h!r} reaches the pole at 1")
    if not 1e-7 <= h <= 1e-4:
        raise ValueError(f"h must lie in [1e-7, 1e-4], got {h!r}")
    f = fn.ambient if isinstance(fn, DfMap) else fn
    n = c.shape[0]
    J = np.empty((n, n))
    for j in range(n):
        e = np.zeros(n)
        e[j] = h
        J[:, j] = (f(c + e) - f(c - e)) / (2.0 * h)
    return J
