"""Local Lefschetz indices, stability classes, and the uniqueness certificate.

On a compact convex domain the map is homotopic to the identity through
t*x + (1-t)*F(x), so the indices sign det(I - dG) summed over all fixed
points must equal the Euler characteristic, which is 1. When every interior
fixed point has reduced spectral radius below 1, each index is +1 and the
count forces exactly one fixed point.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from .dfmap import DfMap, simulate
from .errors import NotInBasin, SpectralCrossCheckFailed, SpectralGapTooSmall, TailTooShort
from .jacobian import fixed_point_jacobian, reduced_jacobian
from .linalg import df_spectrum_via_symmetrization, signed_det, split_zero_eigenvalue
from .simplex import SimplexPoint
from .solver import FixedPointRecord, SolverConfig, enumerate_fixed_points, residual

EULER_CHARACTERISTIC = 1
MARGINAL_TOL = 1e-9
CROSS_CHECK_TOL = 1e-8
STABLE_RECORD_TOL = 1e-10

BASIN_RADIUS = 1e-3
TAIL_FLOOR = 1e-12
MIN_TAIL = 10
MIN_STEPS = 50


class Stability(str, enum.Enum):
    EXP_STABLE = "ExpStable"
    UNSTABLE = "Unstable"
    MARGINAL = "Marginal"


class Verdict(str, enum.Enum):
    UNIQUE_EXP_STABLE = "UniqueExpStable"
    INCONSISTENT = "Inconsistent"
    INCONCLUSIVE = "Inconclusive"


@dataclass(frozen=True)
class StabilityReport:
    reduced_eigenvalues: np.ndarray
    spectral_radius: float
    stability: Stability
    lefschetz_index: int  # 0 flags a marginal (non-Lefschetz) fixed point
    full_eigenvalues: np.ndarray
    det_i_minus_dg: float


@dataclass(frozen=True)
class CornerReport:
    corner: int
    eigenvalue: float
    zero_multiplicity: int


@dataclass
class LefschetzCertificate:
    interior_points: list[tuple[FixedPointRecord, StabilityReport]]
    corner_reports: list[CornerReport]
    index_sum: int
    euler_characteristic: int
    verdict: Verdict
    nonconverged_starts: int
    seed: int
    notes: list[str] = field(default_factory=list)

    @property
    def corners_unstable(self) -> bool:
        return all(c.eigenvalue > 1.0 for c in self.corner_reports)


@dataclass(frozen=True)
class RateEstimate:
    spectral_rate: float
    empirical_rate: float
    tail_window: int

    @property
    def relative_gap(self) -> float:
        return abs(self.empirical_rate - self.spectral_rate) / self.spectral_rate


def stability_report(m: DfMap, record: FixedPointRecord, delta: float = 1e-9) -> StabilityReport:
    """Spectrum, stability class and Lefschetz index at an interior fixed point.

    The spectrum comes from the symmetrized full Jacobian with its zero
    eigenvalue removed; the index from the explicit manifold Jacobian. The two
    routes are cross-checked through trace and determinant.
    """
    if record.is_corner:
        raise ValueError("corner fixed points are handled by corner_spectrum")
    x = record.location
    J = fixed_point_jacobian(m, x, delta, tol=STABLE_RECORD_TOL)
    full_eigs = df_spectrum_via_symmetrization(J, x.coords)
    _, reduced = split_zero_eigenvalue(full_eigs)
    dG = reduced_jacobian(J)

    if abs(reduced.sum() - np.trace(dG)) > CROSS_CHECK_TOL:
        raise SpectralCrossCheckFailed(
            f"sum of eigenvalues {reduced.sum()!r} != trace(dG) {np.trace(dG)!r}"
        )
    det_dg = signed_det(dG).value
    if abs(np.prod(reduced) - det_dg) > CROSS_CHECK_TOL:
        raise SpectralCrossCheckFailed(
            f"product of eigenvalues {np.prod(reduced)!r} != det(dG) {det_dg!r}"
        )

    radius = float(np.max(np.abs(reduced)))
    sd = signed_det(np.eye(m.n - 1) - dG)
    if np.any(np.abs(reduced - 1.0) <= MARGINAL_TOL):
        stability, index = Stability.MARGINAL, 0
    else:
        index = sd.sign
        stability = Stability.EXP_STABLE if radius < 1.0 - MARGINAL_TOL else Stability.UNSTABLE
    return StabilityReport(reduced, radius, stability, index, full_eigs, sd.value)


def corner_spectrum(m: DfMap, i: int) -> tuple[float, int]:
    """Nonzero eigenvalue (1 - gamma_i) / gamma_i of dF at e_i, and the count of zeros."""
    if not 0 <= i < m.n:
        raise IndexError(f"corner index {i} out of range for n = {m.n}")
    g = float(m.gamma[i])
    return (1.0 - g) / g, m.n - 1


def certify(m: DfMap, cfg: SolverConfig = SolverConfig()) -> LefschetzCertificate:
    found = enumerate_fixed_points(m, cfg)
    notes = list(found.notes)
    interior = []
    marginal = False
    for rec in found.interior:
        try:
            rep = stability_report(m, rec, cfg.delta)
        except (SpectralGapTooSmall, SpectralCrossCheckFailed) as exc:
            notes.append(f"fixed point {rec.location.tolist()}: {exc}")
            marginal = True
            continue
        marginal |= rep.stability is Stability.MARGINAL
        interior.append((rec, rep))

    corners = [CornerReport(i, *corner_spectrum(m, i)) for i in range(m.n)]
    index_sum = sum(rep.lefschetz_index for _, rep in interior)

    if len(found.interior) > 1:
        verdict = Verdict.INCONSISTENT
        notes.append(f"{len(found.interior)} distinct interior fixed points found")
    elif not found.interior:
        verdict = Verdict.INCONCLUSIVE
        notes.append("no interior fixed point found")
    elif marginal or found.nonconverged_starts:
        verdict = Verdict.INCONCLUSIVE
    elif index_sum != EULER_CHARACTERISTIC:
        verdict = Verdict.INCONSISTENT
        notes.append(f"index sum {index_sum} != Euler characteristic {EULER_CHARACTERISTIC}")
    elif interior[0][1].stability is Stability.EXP_STABLE:
        verdict = Verdict.UNIQUE_EXP_STABLE
    else:
        verdict = Verdict.INCONCLUSIVE
        notes.append("single fixed point is not exponentially stable")

    return LefschetzCertificate(
        interior_points=interior,
        corner_reports=corners,
        index_sum=index_sum,
        euler_characteristic=EULER_CHARACTERISTIC,
        verdict=verdict,
        nonconverged_starts=found.nonconverged_starts,
        seed=cfg.seed,
        notes=notes,
    )


def rate_estimate(
    m: DfMap, xbar: SimplexPoint, x0: SimplexPoint, steps: int, delta: float = 1e-9
) -> RateEstimate:
    """Compare the observed contraction rate of a trajectory with the spectral radius.

    The empirical rate is exp of the least-squares slope of log ||x(k) - xbar||_1
    over the tail where the distance lies in [1e-12, 1e-3].
    """
    if x0.is_corner():
        raise NotInBasin("trajectory starts at a corner, which is itself fixed")
    if steps < MIN_STEPS:
        raise TailTooShort(f"steps = {steps} < {MIN_STEPS}")
    rep = stability_report(m, FixedPointRecord(xbar, residual(m, xbar)), delta)

    traj = simulate(m, x0, steps).as_array()
    dist = np.sum(np.abs(traj - xbar.coords), axis=1)
    inside = np.flatnonzero(dist <= BASIN_RADIUS)
    if inside.size == 0:
        raise NotInBasin(f"trajectory never came within {BASIN_RADIUS} of the fixed point")
    start = int(inside[0])
    below = np.flatnonzero(dist[start:] < TAIL_FLOOR)
    stop = start + int(below[0]) if below.size else dist.shape[0]
    tail = dist[start:stop]
    if tail.shape[0] < MIN_TAIL:
        raise TailTooShort(f"only {tail.shape[0]} tail points (need {MIN_TAIL})")
    k = np.arange(tail.shape[0], dtype=float)
    slope = np.polyfit(k, np.log(tail), 1)[0]
    return RateEstimate(rep.spectral_radius, float(np.exp(slope)), int(tail.shape[0]))
