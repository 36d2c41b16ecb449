"""Locating fixed points: Picard iteration, Newton polishing, multistart enumeration."""
from __future__ import annotations

import logging
from dataclasses import dataclass, field, fields, replace
from typing import Any, Mapping, Optional, Union

import numpy as np

from .dfmap import DfMap, product_form
from .errors import LeftDomain, SingularMatrix, SingularNewtonMatrix
from .jacobian import full_jacobian, reduced_jacobian
from .linalg import linear_solve
from .simplex import (
    DEFAULT_DELTA,
    ShrunkenSimplexSpec,
    SimplexPoint,
    _trusted_point,
    barycenter,
    corner,
    make_simplex_point,
    sample_interior,
)

log = logging.getLogger(__name__)

NEWTON_ENTRY_RESIDUAL = 1e-3
MAX_HALVINGS = 30


@dataclass(frozen=True)
class SolverConfig:
    picard_tol: float = 1e-13
    picard_max_iters: int = 100_000
    newton_tol: float = 1e-14
    newton_max_iters: int = 50
    multistart_count: int = 50
    cluster_radius: float = 1e-7
    seed: int = 0
    delta: float = DEFAULT_DELTA

    def __post_init__(self):
        for name in ("picard_tol", "newton_tol", "cluster_radius", "delta"):
            v = getattr(self, name)
            if not (isinstance(v, (int, float)) and v > 0):
                raise ValueError(f"{name} must be a positive number, got {v!r}")
        for name in ("picard_max_iters", "newton_max_iters", "multistart_count", "seed"):
            v = getattr(self, name)
            if isinstance(v, bool) or not isinstance(v, (int, np.integer)) or v < 0:
                raise ValueError(f"{name} must be a non-negative integer, got {v!r}")
        if self.cluster_radius <= self.newton_tol:
            raise ValueError("cluster_radius must exceed newton_tol")
        ShrunkenSimplexSpec(self.delta)

    @classmethod
    def from_mapping(cls, overrides: Mapping[str, Any], base: Optional["SolverConfig"] = None):
        base = base or cls()
        known = {f.name: f.type for f in fields(cls)}
        unknown = set(overrides) - set(known)
        if unknown:
            raise ValueError(f"unknown solver option(s): {sorted(unknown)}")
        coerced = {}
        for k, v in overrides.items():
            default = getattr(base, k)
            if isinstance(default, int) and not isinstance(v, bool) and float(v) == int(v):
                coerced[k] = int(v)
            else:
                coerced[k] = float(v) if isinstance(default, float) else v
        return replace(base, **coerced)


@dataclass(frozen=True)
class FixedPointRecord:
    location: SimplexPoint
    residual: float
    basin_hits: int = 1
    is_corner: bool = False
    iterations: int = 0


@dataclass(frozen=True)
class NonConvergence:
    """Picard ran out of budget; an outcome, not an error."""

    location: SimplexPoint
    residual: float
    iterations: int


def residual(m: DfMap, x: SimplexPoint) -> float:
    return float(np.max(np.abs(product_form(m.gamma, x.coords) - x.coords)))


def picard_solve(
    m: DfMap, x0: SimplexPoint, cfg: SolverConfig = SolverConfig()
) -> Union[FixedPointRecord, NonConvergence]:
    """Iterate x <- F(x) until ||F(x) - x||_inf <= picard_tol."""
    return picard_batch(m, [x0], cfg)[0]


def picard_batch(
    m: DfMap, starts: list[SimplexPoint], cfg: SolverConfig = SolverConfig()
) -> list[Union[FixedPointRecord, NonConvergence]]:
    """Run independent Picard iterations from several starts as one array.

    Each row follows exactly the iteration of :func:`picard_solve`; rows stop
    individually as they meet the tolerance.
    """
    out: list[Union[FixedPointRecord, NonConvergence, None]] = [None] * len(starts)
    idx = []
    for k, x0 in enumerate(starts):
        if x0.is_corner():
            out[k] = FixedPointRecord(x0, 0.0, basin_hits=1, is_corner=True)
        else:
            idx.append(k)
    if not idx:
        return out
    active = np.array(idx)
    X = np.array([starts[k].coords for k in idx])
    for it in range(cfg.picard_max_iters + 1):
        FX = product_form(m.gamma, X)
        r = np.max(np.abs(FX - X), axis=1)
        done = r <= cfg.picard_tol
        for j in np.flatnonzero(done):
            out[active[j]] = FixedPointRecord(_trusted_point(X[j]), float(r[j]), iterations=it)
        if it == cfg.picard_max_iters:
            for j in np.flatnonzero(~done):
                out[active[j]] = NonConvergence(_trusted_point(X[j]), float(r[j]), it)
            break
        keep = ~done
        if not np.any(keep):
            break
        active, X = active[keep], FX[keep]
    return out


def _lift(y: np.ndarray) -> np.ndarray:
    return np.append(y, 1.0 - y.sum())


def newton_refine(m: DfMap, x_approx: SimplexPoint, cfg: SolverConfig = SolverConfig()) -> FixedPointRecord:
    """Newton's method on G(y) - y = 0 in the chart y = (x_1, ..., x_{n-1}).

    Steps that leave the shrunken simplex or fail to reduce the residual are
    halved (at most 30 times). If no halving helps, the current iterate is
    returned, so the residual never increases.
    """
    domain = ShrunkenSimplexSpec(cfg.delta)
    r = residual(m, x_approx)
    if r > NEWTON_ENTRY_RESIDUAL:
        raise ValueError(f"residual {r:.3e} too large to start Newton (needs <= 1e-3)")
    if not domain.contains(x_approx):
        raise LeftDomain("starting point lies outside the shrunken simplex")
    x = x_approx
    it = 0
    while r > cfg.newton_tol and it < cfg.newton_max_iters:
        it += 1
        y = x.coords[:-1]
        Gy = product_form(m.gamma, x.coords)[:-1]
        dG = reduced_jacobian(full_jacobian(m, x, cfg.delta))
        try:
            step = linear_solve(dG - np.eye(m.n - 1), Gy - y)
        except SingularMatrix as exc:
            raise SingularNewtonMatrix(str(exc)) from exc
        lam = 1.0
        accepted = None
        inside = False
        for _ in range(MAX_HALVINGS + 1):
            cand = _lift(y - lam * step)
            if np.all(cand >= 0.0) and np.max(cand) <= 1.0 - cfg.delta:
                inside = True
                xc = make_simplex_point(cand)
                rc = residual(m, xc)
                if rc < r:
                    accepted = (xc, rc)
                    break
            lam *= 0.5
        if accepted is None:
            if not inside:
                raise LeftDomain("Newton step could not be kept inside the shrunken simplex")
            break  # residual floor reached
        x, r = accepted
    return FixedPointRecord(x, r, iterations=it)


@dataclass
class FixedPointSet:
    """Deduplicated fixed points plus accounting for the multistart run."""

    records: list[FixedPointRecord]
    converged_starts: int
    nonconverged_starts: int
    seed: int
    notes: list[str] = field(default_factory=list)

    @property
    def interior(self) -> list[FixedPointRecord]:
        return [r for r in self.records if not r.is_corner]

    @property
    def corners(self) -> list[FixedPointRecord]:
        return [r for r in self.records if r.is_corner]

    def __iter__(self):
        return iter(self.records)

    def __len__(self) -> int:
        return len(self.records)


def _cluster(points: list[np.ndarray], radius: float) -> list[list[int]]:
    """Union-find on the graph joining points within ``radius`` in sup-norm."""
    parent = list(range(len(points)))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(len(points)):
        for j in range(i + 1, len(points)):
            if np.max(np.abs(points[i] - points[j])) <= radius:
                ri, rj = find(i), find(j)
                if ri != rj:
                    parent[max(ri, rj)] = min(ri, rj)
    groups: dict[int, list[int]] = {}
    for i in range(len(points)):
        groups.setdefault(find(i), []).append(i)
    return list(groups.values())


def starting_points(n: int, cfg: SolverConfig) -> list[SimplexPoint]:
    """Barycenter followed by ``multistart_count`` seeded draws (none if the count is 0)."""
    if cfg.multistart_count == 0:
        return []
    return [barycenter(n)] + sample_interior(n, cfg.multistart_count, cfg.seed, cfg.delta)


def enumerate_fixed_points(m: DfMap, cfg: SolverConfig = SolverConfig()) -> FixedPointSet:
    """Find every fixed point reachable from the seeded starts, plus the n corners.

    Records are sorted by their coordinates (first coordinate first).
    """
    found: list[FixedPointRecord] = []
    nonconverged = 0
    notes: list[str] = []
    for k, rec in enumerate(picard_batch(m, starting_points(m.n, cfg), cfg)):
        if isinstance(rec, NonConvergence):
            nonconverged += 1
            log.info("start %d did not converge (residual %.3e)", k, rec.residual)
            continue
        try:
            refined = newton_refine(m, rec.location, cfg)
            if refined.residual <= rec.residual:
                rec = replace(refined, iterations=rec.iterations + refined.iterations)
        except (SingularNewtonMatrix, LeftDomain) as exc:
            notes.append(f"start {k}: Newton refinement skipped ({type(exc).__name__})")
        found.append(rec)

    interior: list[FixedPointRecord] = []
    for group in _cluster([r.location.coords for r in found], cfg.cluster_radius):
        best = min(group, key=lambda i: (found[i].residual, i))
        interior.append(replace(found[best], basin_hits=len(group)))

    corners = [FixedPointRecord(corner(m.n, i), 0.0, basin_hits=0, is_corner=True) for i in range(m.n)]
    records = sorted(interior + corners, key=lambda r: tuple(r.location.coords))
    return FixedPointSet(records, len(found), nonconverged, cfg.seed, notes)
