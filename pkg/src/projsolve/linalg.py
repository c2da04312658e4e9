"""Dense linear-algebra primitives shared by all solvers.

Matrices are numpy arrays (dense) or scipy CSR matrices; vectors are 1-D
numpy arrays. Everything runs in double precision. The small projected
systems that arise inside the projection steps are solved directly
(Cholesky for the symmetric definite case, column-pivoted orthogonal
factorization for least squares), never iteratively.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg
import scipy.sparse

__all__ = [
    "SpectralBounds",
    "as_matrix",
    "as_vector",
    "matvec",
    "solve_spd_small",
    "solve_least_squares",
    "singular_extremes",
    "a_norm_sq",
    "RANK_REL_TOL",
]

# Relative pivot cutoff for rank detection in the least-squares solver.
RANK_REL_TOL = 1e-12


@dataclass(frozen=True)
class SpectralBounds:
    """Extreme singular values of a matrix, sigma_max >= sigma_min >= 0."""

    sigma_max: float
    sigma_min: float

    def __post_init__(self):
        if not (np.isfinite(self.sigma_max) and np.isfinite(self.sigma_min)):
            raise ValueError("singular values must be finite")
        if self.sigma_min < 0 or self.sigma_max < self.sigma_min:
            raise ValueError(
                f"need sigma_max >= sigma_min >= 0, got "
                f"({self.sigma_max}, {self.sigma_min})"
            )


def as_vector(v, name: str = "vector") -> np.ndarray:
    """Coerce to a finite 1-D float array."""
    arr = np.asarray(v, dtype=float)
    if arr.ndim != 1 or arr.size == 0:
        raise ValueError(f"{name} must be a non-empty 1-D array, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains non-finite entries")
    return arr


def as_matrix(A, name: str = "matrix"):
    """Coerce to a finite 2-D float array, or pass through a CSR matrix."""
    if scipy.sparse.issparse(A):
        A = A.tocsr()
        if not np.all(np.isfinite(A.data)):
            raise ValueError(f"{name} contains non-finite entries")
        return A
    arr = np.asarray(A, dtype=float)
    if arr.ndim != 2 or arr.size == 0:
        raise ValueError(f"{name} must be a non-empty 2-D array, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains non-finite entries")
    return arr


def _to_dense(A) -> np.ndarray:
    if scipy.sparse.issparse(A):
        return np.asarray(A.todense())
    return np.asarray(A, dtype=float)


def matvec(A, x: np.ndarray) -> np.ndarray:
    """Matrix-vector product ``A @ x`` with dimension checking."""
    if A.shape[1] != x.shape[0]:
        raise ValueError(f"dimension mismatch: {A.shape} @ {x.shape}")
    return A @ x


def solve_spd_small(B, q: np.ndarray) -> np.ndarray:
    """Solve ``B z = q`` for a small symmetric positive definite ``B``.

    Uses a Cholesky factorization; a non-positive pivot raises
    ``numpy.linalg.LinAlgError`` ("not positive definite"), which callers
    use to detect that the surrounding matrix was not SPD after all.
    """
    B = _to_dense(B)
    q = np.asarray(q, dtype=float)
    if B.ndim != 2 or B.shape[0] != B.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {B.shape}")
    if q.shape[0] != B.shape[0]:
        raise ValueError(f"dimension mismatch: {B.shape} vs {q.shape}")
    try:
        c_and_lower = scipy.linalg.cho_factor(B, lower=True, check_finite=False)
    except scipy.linalg.LinAlgError as exc:
        raise np.linalg.LinAlgError("matrix is not positive definite") from exc
    return scipy.linalg.cho_solve(c_and_lower, q, check_finite=False)


def solve_least_squares(W, r: np.ndarray) -> np.ndarray:
    """Least-squares solution of ``min ||W y - r||_2``.

    Solved by a column-pivoted complete orthogonal factorization (LAPACK
    gelsy) with relative pivot threshold ``RANK_REL_TOL``; a rank-deficient
    ``W`` yields the minimum-norm solution on the detected rank, so a zero
    column maps to a zero coefficient.
    """
    W = _to_dense(W)
    r = np.asarray(r, dtype=float)
    if W.ndim != 2:
        raise ValueError(f"expected a 2-D matrix, got shape {W.shape}")
    if W.shape[0] != r.shape[0]:
        raise ValueError(f"dimension mismatch: {W.shape} vs {r.shape}")
    y, _, _, _ = scipy.linalg.lstsq(
        W, r, cond=RANK_REL_TOL, lapack_driver="gelsy", check_finite=False
    )
    return y


def singular_extremes(A) -> SpectralBounds:
    """Largest and smallest singular values of a square matrix.

    Computed from a full SVD, which is exact to roundoff at the problem
    sizes this package targets.
    """
    Ad = _to_dense(A)
    if Ad.ndim != 2 or Ad.shape[0] != Ad.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {Ad.shape}")
    s = np.linalg.svd(Ad, compute_uv=False)
    return SpectralBounds(float(s[0]), float(s[-1]))


def a_norm_sq(A, v: np.ndarray) -> float:
    """Quadratic form ``v.T @ A @ v`` (squared A-norm when A is SPD)."""
    v = np.asarray(v, dtype=float)
    if A.shape[0] != A.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {A.shape}")
    if A.shape[1] != v.shape[0]:
        raise ValueError(f"dimension mismatch: {A.shape} vs {v.shape}")
    return float(v @ (A @ v))
