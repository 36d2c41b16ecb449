"""Points of the unit simplex, its corner-free shrinkage, and influence weights."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import (
    BadDelta,
    DimensionTooSmall,
    InvalidWeights,
    NegativeEntry,
    StarGraphDetected,
    ZeroSum,
)

SUM_TOL = 1e-12
NEG_TOL = 1e-12
DEFAULT_DELTA = 1e-9
MIN_DIM = 3
# gamma_i within this distance of 1/2 is treated as the excluded star case
STAR_MARGIN = 1e-12


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class SimplexPoint:
    """A point of the unit simplex; build it with :func:`make_simplex_point`.

    ``coords`` is a read-only float array of length n >= 3.
    """

    coords: np.ndarray

    @property
    def n(self) -> int:
        return self.coords.shape[0]

    def __len__(self) -> int:
        return self.n

    def __array__(self, dtype=None, copy=None):
        return self.coords if dtype is None else self.coords.astype(dtype)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SimplexPoint):
            return NotImplemented
        return np.array_equal(self.coords, other.coords)

    def __hash__(self) -> int:
        return hash(self.coords.tobytes())

    def __repr__(self) -> str:
        return f"SimplexPoint({self.coords.tolist()!r})"

    def tolist(self) -> list[float]:
        return self.coords.tolist()

    def is_corner(self) -> bool:
        return bool(np.max(self.coords) == 1.0)


def make_simplex_point(raw: Sequence[float] | np.ndarray) -> SimplexPoint:
    """Clamp tiny negatives to zero and renormalize onto the simplex.

    Raises
    ------
    DimensionTooSmall
        fewer than three coordinates.
    NegativeEntry
        an entry below ``-1e-12``.
    ZeroSum
        the entries sum to zero (or are not finite).
    """
    x = np.array(raw, dtype=float).reshape(-1)
    if x.shape[0] < MIN_DIM:
        raise DimensionTooSmall(f"need n >= {MIN_DIM}, got {x.shape[0]}")
    if not np.all(np.isfinite(x)):
        raise ZeroSum("coordinates must be finite")
    if np.any(x < -NEG_TOL):
        i = int(np.argmin(x))
        raise NegativeEntry(f"coordinate {i} is {x[i]!r}")
    x = np.clip(x, 0.0, None)
    s = x.sum()
    if s <= 0.0:
        raise ZeroSum("coordinates sum to zero")
    x = np.clip(x / s, 0.0, 1.0)
    return SimplexPoint(_frozen(x))


def _trusted_point(x: np.ndarray) -> SimplexPoint:
    # caller guarantees x already lies on the simplex
    return SimplexPoint(_frozen(x))


def barycenter(n: int) -> SimplexPoint:
    return make_simplex_point(np.ones(n))


def corner(n: int, i: int) -> SimplexPoint:
    """The canonical unit vector e_i (0-based index)."""
    e = np.zeros(n)
    e[i] = 1.0
    return make_simplex_point(e)


@dataclass(frozen=True)
class ShrunkenSimplexSpec:
    """Simplex with every coordinate capped at ``1 - delta`` (corners removed)."""

    delta: float = DEFAULT_DELTA

    def __post_init__(self):
        if not 0.0 < self.delta < 1.0:
            raise BadDelta(f"delta must lie in (0, 1), got {self.delta!r}")

    def contains(self, x: SimplexPoint | np.ndarray) -> bool:
        c = np.asarray(x, dtype=float)
        return bool(
            np.all(c >= 0.0)
            and abs(c.sum() - 1.0) <= SUM_TOL
            and np.max(c) <= 1.0 - self.delta
        )


def sample_interior(n: int, count: int, seed: int, delta: float = DEFAULT_DELTA) -> list[SimplexPoint]:
    """Draw ``count`` exchangeable points of the shrunken simplex.

    Exponential draws normalized to sum one give the flat Dirichlet; draws whose
    largest coordinate exceeds ``1 - delta`` are rejected and redrawn.
    """
    if n < MIN_DIM:
        raise DimensionTooSmall(f"need n >= {MIN_DIM}, got {n}")
    if count < 1:
        raise ValueError(f"count must be >= 1, got {count}")
    if not 0.0 < delta < 1.0 / n:
        raise BadDelta(f"delta must lie in (0, 1/n) = (0, {1.0 / n!r}), got {delta!r}")
    rng = np.random.default_rng(seed)
    out: list[SimplexPoint] = []
    while len(out) < count:
        e = rng.exponential(size=n)
        x = e / e.sum()
        if x.max() <= 1.0 - delta:
            out.append(make_simplex_point(x))
    return out


def permute(p: Sequence[int], x: SimplexPoint) -> SimplexPoint:
    """Move coordinate i of ``x`` to position ``p[i]``.

    ``p`` is a 0-based permutation; composition satisfies
    ``permute(p o q, x) == permute(p, permute(q, x))`` with ``(p o q)[i] = p[q[i]]``.
    """
    perm = np.asarray(p, dtype=int)
    n = x.n
    if perm.shape != (n,) or not np.array_equal(np.sort(perm), np.arange(n)):
        raise ValueError(f"{list(p)!r} is not a permutation of range({n})")
    y = np.empty(n)
    y[perm] = x.coords
    return _trusted_point(y)


def compose(p: Sequence[int], q: Sequence[int]) -> list[int]:
    """Permutation ``p o q`` (apply q first)."""
    return [int(p[qi]) for qi in q]


@dataclass(frozen=True, eq=False)
class InfluenceWeights:
    """Positive weights summing to one, every entry strictly below 1/2."""

    gamma: np.ndarray = field()

    def __post_init__(self):
        g = np.array(self.gamma, dtype=float).reshape(-1)
        if g.shape[0] < MIN_DIM:
            raise DimensionTooSmall(f"need n >= {MIN_DIM}, got {g.shape[0]}")
        if not np.all(np.isfinite(g)) or np.any(g <= 0.0):
            raise InvalidWeights(f"weights must be finite and positive: {g.tolist()!r}")
        if abs(g.sum() - 1.0) > SUM_TOL:
            raise InvalidWeights(f"weights sum to {g.sum()!r}, not 1")
        i = int(np.argmax(g))
        if g[i] >= 0.5 - STAR_MARGIN:
            raise StarGraphDetected(i, float(g[i]))
        object.__setattr__(self, "gamma", _frozen(g))

    @classmethod
    def normalized(cls, raw: Sequence[float]) -> "InfluenceWeights":
        g = np.asarray(raw, dtype=float)
        return cls(g / g.sum())

    @classmethod
    def uniform(cls, n: int) -> "InfluenceWeights":
        return cls(np.full(n, 1.0 / n))

    @property
    def n(self) -> int:
        return self.gamma.shape[0]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, InfluenceWeights):
            return NotImplemented
        return np.array_equal(self.gamma, other.gamma)

    def __hash__(self) -> int:
        return hash(self.gamma.tobytes())

    def __repr__(self) -> str:
        return f"InfluenceWeights({self.gamma.tolist()!r})"

    def permuted(self, p: Sequence[int]) -> "InfluenceWeights":
        g = np.empty(self.n)
        g[np.asarray(p, dtype=int)] = self.gamma
        return InfluenceWeights(g)


def random_weights(n: int, rng: np.random.Generator) -> InfluenceWeights:
    """Flat-Dirichlet weights, rejection-sampled until every entry is below 1/2."""
    while True:
        g = rng.exponential(size=n)
        g = g / g.sum()
        if g.max() < 0.5 - 1e-6 and g.min() > 0.0:
            return InfluenceWeights(g)
