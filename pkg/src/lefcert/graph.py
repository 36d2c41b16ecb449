"""Influence weights from a relative interaction matrix.

In the DeGroot-Friedkin model the weights are the dominant left eigenvector of
the row-stochastic, zero-diagonal interaction matrix C (gamma^T C = gamma^T,
normalized to sum one). A weight reaching 1/2 happens exactly for star graphs,
which the certificate does not cover.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import (
    InvalidInteractionMatrix,
    NoConvergence,
    NotStronglyConnected,
    StarGraphDetected,
)
from .simplex import STAR_MARGIN, InfluenceWeights

ROW_SUM_TOL = 1e-12
POWER_TOL = 1e-13
POWER_MAX_ITERS = 100_000


def _reachable(adj: np.ndarray, source: int) -> np.ndarray:
    seen = np.zeros(adj.shape[0], dtype=bool)
    seen[source] = True
    stack = [source]
    while stack:
        u = stack.pop()
        for v in np.flatnonzero(adj[u] & ~seen):
            seen[v] = True
            stack.append(int(v))
    return seen


def validate_connectivity(C: np.ndarray) -> bool:
    """True iff the support graph of ``C`` is strongly connected.

    Forward and backward reachability from node 0 must both cover every node.
    """
    adj = np.asarray(C) > 0
    np.fill_diagonal(adj, False)
    return bool(_reachable(adj, 0).all() and _reachable(adj.T, 0).all())


@dataclass(frozen=True, eq=False)
class InteractionMatrix:
    entries: np.ndarray

    def __post_init__(self):
        C = np.array(self.entries, dtype=float)
        if C.ndim != 2 or C.shape[0] != C.shape[1] or C.shape[0] < 3:
            raise InvalidInteractionMatrix(f"need a square matrix with n >= 3, got shape {C.shape}")
        if not np.all(np.isfinite(C)) or np.any(C < 0.0):
            raise InvalidInteractionMatrix("entries must be finite and nonnegative")
        if np.any(np.diag(C) != 0.0):
            raise InvalidInteractionMatrix("diagonal must be exactly zero")
        rows = C.sum(axis=1)
        if np.max(np.abs(rows - 1.0)) > ROW_SUM_TOL:
            raise InvalidInteractionMatrix(f"rows must sum to 1, got {rows.tolist()!r}")
        if not validate_connectivity(C):
            raise NotStronglyConnected("interaction graph is not strongly connected")
        C.setflags(write=False)
        object.__setattr__(self, "entries", C)

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[float]]) -> "InteractionMatrix":
        return cls(np.asarray(rows, dtype=float))


def left_perron_vector(C: np.ndarray, tol: float = POWER_TOL, max_iters: int = POWER_MAX_ITERS) -> np.ndarray:
    """Stationary left vector of a row-stochastic matrix by power iteration.

    Iterates the lazy chain (I + C^T)/2, which has the same fixed vector as C^T
    but is aperiodic, so bipartite graphs such as stars still converge.
    """
    n = C.shape[0]
    g = np.full(n, 1.0 / n)
    for _ in range(max_iters):
        nxt = 0.5 * (g + C.T @ g)
        nxt /= nxt.sum()
        if np.max(np.abs(nxt - g)) <= tol:
            return nxt
        g = nxt
    raise NoConvergence(f"power iteration did not settle in {max_iters} iterations")


def gamma_from_matrix(C: InteractionMatrix | np.ndarray) -> InfluenceWeights:
    if not isinstance(C, InteractionMatrix):
        C = InteractionMatrix(np.asarray(C, dtype=float))
    g = left_perron_vector(C.entries)
    i = int(np.argmax(g))
    if g[i] >= 0.5 - STAR_MARGIN:
        raise StarGraphDetected(i, float(g[i]))
    return InfluenceWeights(g / g.sum())
