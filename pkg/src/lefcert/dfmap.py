"""The DeGroot-Friedkin self-confidence map and its iteration.

The map sends x to the vector proportional to gamma_i / (1 - x_i). Multiplying
through by prod_k (1 - x_k) gives the equivalent form

    F_i(x) = gamma_i * prod_{k != i} (1 - x_k) / sum_j gamma_j * prod_{k != j} (1 - x_k)

which has no division by (1 - x_i), fixes every corner e_i without a special
case, and extends analytically to a neighbourhood of the simplex. It is the
only evaluation path used here.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .simplex import InfluenceWeights, SimplexPoint, _trusted_point, make_simplex_point


def _exclusive_products(v: np.ndarray) -> np.ndarray:
    """prod_{k != i} v_k along the last axis, via prefix and suffix products."""
    ones = np.ones(v.shape[:-1] + (1,))
    prefix = np.multiply.accumulate(np.concatenate([ones, v[..., :-1]], axis=-1), axis=-1)
    suffix = np.multiply.accumulate(np.concatenate([ones, v[..., :0:-1]], axis=-1), axis=-1)
    return prefix * suffix[..., ::-1]


def _exclusive_sums(v: np.ndarray) -> np.ndarray:
    zeros = np.zeros(v.shape[:-1] + (1,))
    prefix = np.add.accumulate(np.concatenate([zeros, v[..., :-1]], axis=-1), axis=-1)
    suffix = np.add.accumulate(np.concatenate([zeros, v[..., :0:-1]], axis=-1), axis=-1)
    return prefix + suffix[..., ::-1]


def product_form(gamma: np.ndarray, x: np.ndarray) -> np.ndarray:
    """Evaluate the map at ambient vector(s) ``x`` (last axis), with no simplex checks.

    Defined wherever some numerator is nonzero, which includes an open set
    around the simplex. Used directly by finite differencing.
    """
    one_minus = 1.0 - x
    num = gamma * _exclusive_products(one_minus)
    total = num.sum(axis=-1, keepdims=True)
    bad = (total == 0.0) | ~np.isfinite(total) | (np.abs(total) < 1e-250)
    if np.any(bad):
        num, total = _rescaled(gamma, one_minus, num, total, bad)
    return num / total


def _rescaled(gamma, one_minus, num, total, bad):
    # numerators underflowed: redo the products in log space and scale by the largest
    with np.errstate(divide="ignore"):
        lognum = np.log(gamma) + _exclusive_sums(np.log(np.abs(one_minus)))
    alt = _exclusive_products(np.sign(one_minus)) * np.exp(
        lognum - np.max(lognum, axis=-1, keepdims=True)
    )
    num = np.where(bad, alt, num)
    return num, num.sum(axis=-1, keepdims=True)


@dataclass(frozen=True)
class DfMap:
    """The self-confidence map for fixed influence weights."""

    weights: InfluenceWeights

    @classmethod
    def from_gamma(cls, gamma: Sequence[float]) -> "DfMap":
        return cls(InfluenceWeights(np.asarray(gamma, dtype=float)))

    @property
    def n(self) -> int:
        return self.weights.n

    @property
    def gamma(self) -> np.ndarray:
        return self.weights.gamma

    def ambient(self, x: np.ndarray) -> np.ndarray:
        return product_form(self.gamma, np.asarray(x, dtype=float))

    def __call__(self, x: SimplexPoint) -> SimplexPoint:
        return evaluate(self, x)


def _check_dim(m: DfMap, x: SimplexPoint) -> None:
    if x.n != m.n:
        raise ValueError(f"point has dimension {x.n}, map has dimension {m.n}")


def evaluate(m: DfMap, x: SimplexPoint) -> SimplexPoint:
    _check_dim(m, x)
    return _trusted_point(product_form(m.gamma, x.coords))


@dataclass(frozen=True)
class Trajectory:
    states: list[SimplexPoint]
    step_count: int

    def as_array(self) -> np.ndarray:
        return np.array([s.coords for s in self.states])


def simulate(m: DfMap, x0: SimplexPoint, steps: int) -> Trajectory:
    if steps < 0:
        raise ValueError(f"steps must be >= 0, got {steps}")
    _check_dim(m, x0)
    states = [x0]
    x = x0
    for _ in range(steps):
        x = evaluate(m, x)
        states.append(x)
    return Trajectory(states, steps)


def homotopy_array(m: DfMap, x: SimplexPoint, t: float) -> np.ndarray:
    """Raw convex combination ``t*x + (1-t)*F(x)`` without renormalization."""
    if not 0.0 <= t <= 1.0:
        raise ValueError(f"t must lie in [0, 1], got {t!r}")
    _check_dim(m, x)
    return t * x.coords + (1.0 - t) * product_form(m.gamma, x.coords)


def homotopy_point(m: DfMap, x: SimplexPoint, t: float) -> SimplexPoint:
    """Point of the straight-line homotopy between the identity (t=1) and F (t=0)."""
    if t == 1.0:
        return x
    return make_simplex_point(homotopy_array(m, x, t))


def homotopy_map(m: DfMap, t: float) -> Callable[[np.ndarray], np.ndarray]:
    """Ambient version of the homotopy at fixed t, e.g. for finite differencing."""
    if not 0.0 <= t <= 1.0:
        raise ValueError(f"t must lie in [0, 1], got {t!r}")

    def h(x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        return t * x + (1.0 - t) * m.ambient(x)

    return h
