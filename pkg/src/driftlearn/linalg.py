"""Dense symmetric-matrix kernels shared by all learners.

Everything here operates on plain float64 numpy arrays: square symmetric
matrices and 1-d vectors. Matrices handed to a solve or log-det must be
SPD; failure raises :class:`~driftlearn.errors.NotPositiveDefinite` rather
than returning garbage. Dimensions stay small (d of a few hundred at most),
so Cholesky is the only factorization used.
"""

import numpy as np
import scipy.linalg

from .errors import DimMismatch, NotPositiveDefinite

SYMMETRY_RTOL = 1e-12


def as_matrix(A) -> np.ndarray:
    """Validate and return A as a square float64 matrix."""
    A = np.asarray(A, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise DimMismatch(f"expected a square matrix, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise ValueError("matrix has non-finite entries")
    return A


def as_vector(v, dim: int | None = None) -> np.ndarray:
    """Validate and return v as a 1-d float64 vector, optionally of length dim."""
    v = np.asarray(v, dtype=float)
    if v.ndim != 1:
        raise DimMismatch(f"expected a 1-d vector, got shape {v.shape}")
    if dim is not None and v.shape[0] != dim:
        raise DimMismatch(f"expected length {dim}, got {v.shape[0]}")
    if not np.all(np.isfinite(v)):
        raise ValueError("vector has non-finite entries")
    return v


def symmetrize(A: np.ndarray) -> np.ndarray:
    """(A + A^T)/2. Applied after every update; recursions are exactly
    symmetric but floating point drifts."""
    return 0.5 * (A + A.T)


def is_symmetric(A: np.ndarray, rtol: float = SYMMETRY_RTOL) -> bool:
    scale = max(1.0, float(np.abs(A).max(initial=0.0)))
    return bool(np.abs(A - A.T).max(initial=0.0) <= rtol * scale)


def rank_one_update(A: np.ndarray, x: np.ndarray) -> np.ndarray:
    """A + x x^T, symmetrized."""
    A = as_matrix(A)
    x = as_vector(x, A.shape[0])
    return symmetrize(A + np.outer(x, x))


def _cholesky(A: np.ndarray):
    try:
        return scipy.linalg.cho_factor(A, lower=True, check_finite=False)
    except scipy.linalg.LinAlgError as exc:
        raise NotPositiveDefinite(str(exc)) from exc


def spd_solve(A: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Solve A z = v for SPD A via Cholesky.

    Raises NotPositiveDefinite if the factorization fails and DimMismatch
    if shapes disagree.
    """
    A = as_matrix(A)
    v = as_vector(v, A.shape[0])
    return scipy.linalg.cho_solve(_cholesky(A), v, check_finite=False)


def spd_solve_matrix(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """Solve A Z = B for SPD A and a matrix right-hand side."""
    A = as_matrix(A)
    B = as_matrix(B)
    if B.shape[0] != A.shape[0]:
        raise DimMismatch(f"rhs rows {B.shape[0]} != dim {A.shape[0]}")
    return scipy.linalg.cho_solve(_cholesky(A), B, check_finite=False)


def spd_inverse(A: np.ndarray) -> np.ndarray:
    """Inverse of SPD A (one solve against the identity), symmetrized."""
    A = as_matrix(A)
    inv = scipy.linalg.cho_solve(_cholesky(A), np.eye(A.shape[0]), check_finite=False)
    return symmetrize(inv)


def logdet(A: np.ndarray) -> float:
    """ln det(A) for SPD A."""
    A = as_matrix(A)
    L = _cholesky(A)[0]
    return float(2.0 * np.sum(np.log(np.diag(L))))


def eig_extremes(A: np.ndarray) -> tuple[float, float]:
    """(lambda_min, lambda_max) of a symmetric matrix."""
    A = as_matrix(A)
    w = np.linalg.eigvalsh(symmetrize(A))
    return float(w[0]), float(w[-1])
