"""Small dense kernels: cyclic Jacobi eigensolver, LU with pivot signs, solves.

Matrices here are at most a few dozen rows, so plain Python loops over numpy
rows are fast enough and keep every step inspectable.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import (
    AsymmetryDetected,
    NoConvergence,
    NotSymmetric,
    SingularMatrix,
    SpectralGapTooSmall,
)

SYM_TOL = 1e-10
JACOBI_TOL = 1e-14
JACOBI_MAX_SWEEPS = 100
PIVOT_TOL = 1e-13
ZERO_EIG_TOL = 1e-9
GAP_TOL = 1e-6


@dataclass(frozen=True)
class SymmetricSpectrum:
    eigenvalues: np.ndarray
    eigenvectors: Optional[np.ndarray] = None
    sweeps: int = 0


@dataclass(frozen=True)
class SignedDeterminant:
    sign: int
    log_magnitude: float

    @property
    def value(self) -> float:
        if self.sign == 0:
            return 0.0
        return self.sign * math.exp(self.log_magnitude)


def _max_norm(M: np.ndarray) -> float:
    return float(np.max(np.abs(M))) if M.size else 0.0


def symmetric_eigenvalues(M: np.ndarray, vectors: bool = False) -> SymmetricSpectrum:
    """Eigenvalues (ascending) of a real symmetric matrix by cyclic Jacobi rotations.

    Sweeps stop once the off-diagonal Frobenius mass is at most
    ``1e-14 * ||M||_F``; more than 100 sweeps raises ``NoConvergence``.
    """
    A = np.array(M, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise NotSymmetric(f"expected a square matrix, got shape {A.shape}")
    n = A.shape[0]
    scale = _max_norm(A)
    if _max_norm(A - A.T) > SYM_TOL * scale:
        raise NotSymmetric("matrix is not symmetric to within 1e-10 relative")
    A = 0.5 * (A + A.T)
    V = np.eye(n)
    fro = float(np.linalg.norm(A))
    target = JACOBI_TOL * fro

    offdiag = ~np.eye(n, dtype=bool)

    def off_mass() -> float:
        return float(np.sqrt(np.sum(A[offdiag] ** 2)))

    sweeps = 0
    while off_mass() > target:
        if sweeps >= JACOBI_MAX_SWEEPS:
            raise NoConvergence(f"Jacobi did not converge in {JACOBI_MAX_SWEEPS} sweeps")
        sweeps += 1
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = A[p, q]
                if apq == 0.0:
                    continue
                diff = A[q, q] - A[p, p]
                if abs(apq) <= 1e-18 * (abs(A[p, p]) + abs(A[q, q])):
                    A[p, q] = A[q, p] = 0.0
                    continue
                # rotation angle zeroing A[p, q] (Golub & Van Loan, sym.schur2)
                if abs(diff) > 1e150 * abs(apq):
                    t = apq / diff
                else:
                    tau = diff / (2.0 * apq)
                    t = math.copysign(1.0, tau) / (abs(tau) + math.sqrt(1.0 + tau * tau))
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = t * c
                Ap = A[:, p].copy()
                Aq = A[:, q].copy()
                A[:, p] = c * Ap - s * Aq
                A[:, q] = s * Ap + c * Aq
                Ap = A[p, :].copy()
                Aq = A[q, :].copy()
                A[p, :] = c * Ap - s * Aq
                A[q, :] = s * Ap + c * Aq
                A[p, q] = A[q, p] = 0.0
                if vectors:
                    Vp = V[:, p].copy()
                    Vq = V[:, q].copy()
                    V[:, p] = c * Vp - s * Vq
                    V[:, q] = s * Vp + c * Vq
    w = np.diag(A).copy()
    order = np.argsort(w, kind="stable")
    return SymmetricSpectrum(w[order], V[:, order] if vectors else None, sweeps)


def df_spectrum_via_symmetrization(full: np.ndarray, x) -> np.ndarray:
    """Real spectrum of the map's full Jacobian at ``x``, sorted ascending.

    With A = diag(1 - x_i), B = J A is the symmetric matrix with B_ii = F_i(1 - F_i)
    and B_ij = -F_i F_j, so J = B A^{-1} is similar to A^{-1/2} B A^{-1/2}.
    """
    J = np.asarray(full, dtype=float)
    xs = np.asarray(x, dtype=float)
    a = 1.0 - xs
    if np.any(a <= 0.0):
        raise ValueError("symmetrization needs a point away from the corners")
    B = J * a[np.newaxis, :]
    if _max_norm(B - B.T) > SYM_TOL * max(_max_norm(B), np.finfo(float).tiny):
        raise AsymmetryDetected("J diag(1 - x) is not symmetric; the Jacobian is wrong")
    r = 1.0 / np.sqrt(a)
    S = r[:, np.newaxis] * B * r[np.newaxis, :]
    return symmetric_eigenvalues(0.5 * (S + S.T)).eigenvalues


def split_zero_eigenvalue(eigs: np.ndarray) -> tuple[float, np.ndarray]:
    """Separate the unique near-zero eigenvalue from the remaining ones.

    Raises ``SpectralGapTooSmall`` unless the smallest magnitude is <= 1e-9 and
    the next one is >= 1e-6.
    """
    w = np.asarray(eigs, dtype=float)
    order = np.argsort(np.abs(w), kind="stable")
    if w.shape[0] < 2:
        raise SpectralGapTooSmall("need at least two eigenvalues")
    z, nxt = abs(w[order[0]]), abs(w[order[1]])
    if z > ZERO_EIG_TOL or nxt < GAP_TOL:
        raise SpectralGapTooSmall(
            f"smallest |eigenvalue| {z:.3e}, next {nxt:.3e}: zero eigenvalue not isolated"
        )
    rest = np.delete(w, order[0])
    return float(w[order[0]]), np.sort(rest)


def _lu(M: np.ndarray):
    """Doolittle LU with partial pivoting; returns (LU, perm, swaps, singular)."""
    A = np.array(M, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {A.shape}")
    n = A.shape[0]
    thresh = PIVOT_TOL * _max_norm(A)
    perm = np.arange(n)
    swaps = 0
    singular = False
    for k in range(n):
        p = k + int(np.argmax(np.abs(A[k:, k])))
        if p != k:
            A[[k, p]] = A[[p, k]]
            perm[[k, p]] = perm[[p, k]]
            swaps += 1
        if abs(A[k, k]) <= thresh or A[k, k] == 0.0:
            singular = True
            continue
        A[k + 1:, k] /= A[k, k]
        A[k + 1:, k + 1:] -= np.outer(A[k + 1:, k], A[k, k + 1:])
    return A, perm, swaps, singular


def signed_det(M: np.ndarray) -> SignedDeterminant:
    LU, _, swaps, singular = _lu(M)
    if singular:
        return SignedDeterminant(0, -math.inf)
    piv = np.diag(LU)
    sign = (-1) ** swaps * int(np.prod(np.sign(piv)))
    return SignedDeterminant(int(sign), float(np.sum(np.log(np.abs(piv)))))


def linear_solve(M: np.ndarray, b: np.ndarray) -> np.ndarray:
    LU, perm, _, singular = _lu(M)
    if singular:
        raise SingularMatrix("matrix is singular to working precision")
    n = LU.shape[0]
    y = np.asarray(b, dtype=float)[perm].copy()
    for i in range(n):
        y[i] -= LU[i, :i] @ y[:i]
    for i in range(n - 1, -1, -1):
        y[i] = (y[i] - LU[i, i + 1:] @ y[i + 1:]) / LU[i, i]
    return y
