"""Small dense symmetric linear algebra sized for a few dozen parameters.

Matrices are plain 2-D float64 numpy arrays; ``as_matrix`` validates and
freezes them.  The eigensolver uses cyclic Jacobi rotation sweeps, which are
robust for the small symmetric matrices this package works with.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

SYMMETRY_RTOL = 1e-12
OFFDIAG_RTOL = 1e-12
MAX_SWEEPS = 100
PIVOT_RTOL = 1e-12


class NonSymmetricError(ValueError):
    """Input matrix is not symmetric within tolerance."""


class RankDeficiencyError(ArithmeticError):
    """Normal-equations factorization hit a negligible pivot."""


@dataclass(frozen=True)
class SymSpectrumSummary:
    """Extremal eigenvalues of a symmetric matrix.

    lambda_tilde is the largest eigenvalue of the inverse (the reciprocal of
    lambda_min); it is +inf when the matrix is not positive definite.
    """

    lambda_min: float
    lambda_max: float
    lambda_tilde: float
    condition: float


def as_matrix(a) -> np.ndarray:
    """Validate a 2-D real matrix with finite entries; returns a read-only copy."""
    m = np.array(a, dtype=float, order="C")
    if m.ndim != 2 or m.shape[0] < 1 or m.shape[1] < 1:
        raise ValueError(f"expected a 2-D matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix entries must be finite")
    m.flags.writeable = False
    return m


def gram_normalized(A: np.ndarray) -> np.ndarray:
    """(1/N) * A^T A for an N x p matrix A."""
    A = np.asarray(A, dtype=float)
    if A.ndim != 2 or A.shape[0] < 1:
        raise ValueError(f"expected an N x p matrix with N >= 1, got shape {A.shape}")
    G = A.T @ A / A.shape[0]
    return (G + G.T) / 2.0  # kill rounding asymmetry


def max_abs_entry(A: np.ndarray) -> float:
    """Largest entry magnitude of A (0 for an empty matrix)."""
    A = np.asarray(A, dtype=float)
    if A.size == 0:
        return 0.0
    return float(np.max(np.abs(A)))


def _jacobi_eigenvalues(S: np.ndarray) -> np.ndarray:
    """Eigenvalues of a symmetric matrix by cyclic Jacobi sweeps."""
    A = np.array(S, dtype=float)
    p = A.shape[0]
    if p == 1:
        return A[0, :1].copy()
    scale = math.sqrt(np.sum(A * A))
    if scale == 0.0:
        return np.zeros(p)
    for _ in range(MAX_SWEEPS):
        off = math.sqrt(2.0 * np.sum(np.triu(A, 1) ** 2))
        if off <= OFFDIAG_RTOL * scale:
            break
        for i in range(p - 1):
            for j in range(i + 1, p):
                aij = A[i, j]
                if abs(aij) <= OFFDIAG_RTOL * scale / (p * p):
                    continue
                theta = (A[j, j] - A[i, i]) / (2.0 * aij)
                t = math.copysign(1.0, theta) / (
                    abs(theta) + math.sqrt(1.0 + theta * theta)
                )
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = t * c
                rot_i = c * A[i, :] - s * A[j, :]
                rot_j = s * A[i, :] + c * A[j, :]
                A[i, :], A[j, :] = rot_i, rot_j
                col_i = c * A[:, i] - s * A[:, j]
                col_j = s * A[:, i] + c * A[:, j]
                A[:, i], A[:, j] = col_i, col_j
    return np.diag(A).copy()


def sym_extremal_eigs(S: np.ndarray) -> SymSpectrumSummary:
    """Extremal eigenvalues of a symmetric matrix.

    Raises NonSymmetricError when S deviates from its transpose by more than
    a 1e-12 relative tolerance.
    """
    S = np.asarray(S, dtype=float)
    if S.ndim != 2 or S.shape[0] != S.shape[1]:
        raise NonSymmetricError(f"expected a square matrix, got shape {S.shape}")
    scale = max(float(np.max(np.abs(S))), 1e-300)
    if float(np.max(np.abs(S - S.T))) > SYMMETRY_RTOL * scale:
        raise NonSymmetricError("matrix is not symmetric within 1e-12 relative")
    eigs = _jacobi_eigenvalues((S + S.T) / 2.0)
    lo, hi = float(np.min(eigs)), float(np.max(eigs))
    tilde = 1.0 / lo if lo > 0 else math.inf
    cond = hi / lo if lo > 0 else math.inf
    return SymSpectrumSummary(
        lambda_min=lo, lambda_max=hi, lambda_tilde=tilde, condition=cond
    )


def _cholesky_lower(G: np.ndarray) -> np.ndarray:
    """Cholesky factor of a symmetric positive-definite matrix; each pivot
    must stay above 1e-12 times the trace."""
    p = G.shape[0]
    floor = PIVOT_RTOL * float(np.trace(G))
    L = np.zeros_like(G)
    for j in range(p):
        d = G[j, j] - L[j, :j] @ L[j, :j]
        if not (d > floor):
            raise RankDeficiencyError(
                f"pivot {d:.3e} at column {j} below 1e-12 * trace = {floor:.3e}"
            )
        L[j, j] = math.sqrt(d)
        if j + 1 < p:
            L[j + 1 :, j] = (G[j + 1 :, j] - L[j + 1 :, :j] @ L[j, :j]) / L[j, j]
    return L


def _solve_spd(L: np.ndarray, rhs: np.ndarray) -> np.ndarray:
    """Solve L L^T x = rhs given the lower Cholesky factor L."""
    p = L.shape[0]
    y = np.zeros(p)
    for i in range(p):
        y[i] = (rhs[i] - L[i, :i] @ y[:i]) / L[i, i]
    x = np.zeros(p)
    for i in range(p - 1, -1, -1):
        x[i] = (y[i] - L[i + 1 :, i] @ x[i + 1 :]) / L[i, i]
    return x


def ls_solve(A: np.ndarray, x: np.ndarray) -> np.ndarray:
    """Least-squares solution (A^T A)^{-1} A^T x via the normal equations.

    Requires more rows than columns and a positive-definite Gram matrix;
    raises RankDeficiencyError otherwise.
    """
    A = np.asarray(A, dtype=float)
    x = np.asarray(x, dtype=float).ravel()
    N, p = A.shape
    if N <= p:
        raise ValueError(f"need more rows than columns, got {N} x {p}")
    if x.shape[0] != N:
        raise ValueError(f"rhs length {x.shape[0]} does not match {N} rows")
    G = A.T @ A
    L = _cholesky_lower((G + G.T) / 2.0)
    return _solve_spd(L, A.T @ x)
