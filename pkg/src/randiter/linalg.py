"""Dense float64 vector/matrix kernels.

Matrices are stored column-major (Fortran order) so column slices, the
coordinate-descent hot path, are contiguous. Everything is plain numpy;
only desk-scale exactness is targeted, not BLAS-tuned throughput.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import DimensionError, NotPositiveDefinite, NotSymmetric

SYMMETRY_TOL = 1e-10

# Off-diagonal threshold and sweep cap for the Jacobi eigensolver.
JACOBI_TOL = 1e-12
JACOBI_MAX_SWEEPS = 100


def dense_matrix(values) -> np.ndarray:
    """Validate and return a 2-D float64 array in column-major order.

    Rejects empty matrices and non-finite entries.
    """
    a = np.array(values, dtype=np.float64, order="F")
    if a.ndim != 2:
        raise DimensionError(f"expected a 2-D matrix, got ndim={a.ndim}")
    if a.size == 0:
        raise DimensionError("empty matrix")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix contains NaN or Inf")
    return a


def dense_vector(values) -> np.ndarray:
    """Validate and return a 1-D float64 array with finite entries."""
    v = np.array(values, dtype=np.float64).reshape(-1)
    if v.size == 0:
        raise DimensionError("empty vector")
    if not np.all(np.isfinite(v)):
        raise ValueError("vector contains NaN or Inf")
    return v


def row_norms_sq(X: np.ndarray) -> np.ndarray:
    """Squared Euclidean norm of every row."""
    return np.einsum("ij,ij->i", X, X)


def col_norms_sq(X: np.ndarray) -> np.ndarray:
    """Squared Euclidean norm of every column."""
    return np.einsum("ij,ij->j", X, X)


def frobenius_sq(X: np.ndarray) -> float:
    """Squared Frobenius norm; equals sum(row_norms_sq) = sum(col_norms_sq)."""
    return float(np.einsum("ij,ij->", X, X))


def matvec(X: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Dense product X v."""
    if X.shape[1] != v.shape[0]:
        raise DimensionError(f"matvec: {X.shape} x {v.shape}")
    return X @ v


def matvec_t(X: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Dense product X^T v."""
    if X.shape[0] != v.shape[0]:
        raise DimensionError(f"matvec_t: {X.shape}^T x {v.shape}")
    return X.T @ v


def _check_symmetric(A: np.ndarray) -> None:
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise DimensionError(f"expected a square matrix, got {A.shape}")
    scale = 1.0 + float(np.max(np.abs(A)))
    if float(np.max(np.abs(A - A.T))) > SYMMETRY_TOL * scale:
        raise NotSymmetric("matrix is not symmetric within tolerance")


def solve_spd(A: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Solve A x = b for symmetric positive-definite A via Cholesky."""
    _check_symmetric(A)
    if A.shape[0] != b.shape[0]:
        raise DimensionError(f"solve_spd: {A.shape} x {b.shape}")
    try:
        L = np.linalg.cholesky(A)
    except np.linalg.LinAlgError as exc:
        raise NotPositiveDefinite(str(exc)) from exc
    z = np.linalg.solve(L, b)
    return np.linalg.solve(L.T, z)


def sym_eigh(A: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues (ascending) and eigenvectors of a symmetric matrix.

    Cyclic Jacobi rotations; sweeps stop when the off-diagonal Frobenius
    norm drops below JACOBI_TOL * ||A||_F, capped at JACOBI_MAX_SWEEPS.
    """
    _check_symmetric(A)
    n = A.shape[0]
    a = np.array(A, dtype=np.float64)
    a = 0.5 * (a + a.T)
    V = np.eye(n)
    fro = math.sqrt(frobenius_sq(a)) if frobenius_sq(a) > 0 else 0.0
    for _ in range(JACOBI_MAX_SWEEPS):
        off = math.sqrt(max(frobenius_sq(a) - float(np.sum(np.diag(a) ** 2)), 0.0))
        if off <= JACOBI_TOL * fro:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                diff = a[q, q] - a[p, p]
                if abs(apq) < 1e-36 * abs(diff):
                    t = apq / diff
                else:
                    theta = diff / (2.0 * apq)
                    t = math.copysign(1.0, theta) / (abs(theta) + math.hypot(theta, 1.0))
                c = 1.0 / math.hypot(t, 1.0)
                s = t * c
                # A <- J^T A J with the (p, q) plane rotation J = [[c, s], [-s, c]]
                rot = np.array([[c, s], [-s, c]])
                a[[p, q], :] = rot.T @ a[[p, q], :]
                a[:, [p, q]] = a[:, [p, q]] @ rot
                a[p, q] = 0.0
                a[q, p] = 0.0
                V[:, [p, q]] = V[:, [p, q]] @ rot
    w = np.diag(a).copy()
    order = np.argsort(w, kind="stable")
    return w[order], V[:, order]


def sym_eigs(A: np.ndarray) -> np.ndarray:
    """Eigenvalues of a symmetric matrix, sorted ascending."""
    return sym_eigh(A)[0]


def energy_norm_sq(M: np.ndarray, v: np.ndarray) -> float:
    """v^T M v for symmetric M, clamped at zero against rounding."""
    if M.shape[0] != M.shape[1] or M.shape[0] != v.shape[0]:
        raise DimensionError(f"energy_norm_sq: {M.shape} x {v.shape}")
    val = float(v @ (M @ v))
    return max(val, 0.0)
