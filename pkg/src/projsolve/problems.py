"""Benchmark problem generators and file-based instances.

All generators build the right-hand side as ``b = A @ ones`` so the exact
solution is the all-ones vector and error norms are computable; they are
pure functions of their parameters, so a fixed seed reproduces an instance
bit for bit.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .linalg import as_matrix, as_vector, matvec
from .mmio import read_matrix_market

__all__ = [
    "ProblemInstance",
    "gen_hankel",
    "gen_prescribed_singular",
    "gen_random_spd",
    "load_problem",
]


@dataclass
class ProblemInstance:
    """A square linear system ``A x = b`` with an optional known solution."""

    A: object
    b: np.ndarray
    x_star: np.ndarray | None = None
    label: str = ""

    def __post_init__(self):
        self.A = as_matrix(self.A, "A")
        self.b = as_vector(self.b, "b")
        if self.A.shape[0] != self.A.shape[1]:
            raise ValueError(f"A must be square, got shape {self.A.shape}")
        if self.A.shape[0] != self.b.shape[0]:
            raise ValueError(
                f"dimension mismatch: A is {self.A.shape}, b has length {self.b.shape[0]}"
            )
        if self.x_star is not None:
            self.x_star = as_vector(self.x_star, "x_star")
            if self.x_star.shape[0] != self.b.shape[0]:
                raise ValueError("x_star length does not match b")
            gap = np.linalg.norm(matvec(self.A, self.x_star) - self.b)
            if gap > 1e-10 * max(np.linalg.norm(self.b), 1e-300):
                raise ValueError(
                    f"x_star does not solve the system: ||A x* - b|| = {gap:.3e}"
                )

    @property
    def n(self) -> int:
        return self.b.shape[0]


def gen_hankel(n: int) -> ProblemInstance:
    """Symmetric test matrix with entries ``0.5 / (n - i - j + 1.5)`` (1-based).

    Constant along anti-diagonals; the half-integer offset keeps every
    denominator nonzero. Well conditioned at every size (condition number
    stays O(1)), which makes it a favourable case for subspace projection
    steps.
    """
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    i = np.arange(1, n + 1, dtype=float)
    A = 0.5 / (n - i[:, None] - i[None, :] + 1.5)
    x_star = np.ones(n)
    return ProblemInstance(A, A @ x_star, x_star, label=f"hankel-{n}")


def gen_prescribed_singular(n: int, seed: int) -> ProblemInstance:
    """Matrix with singular values ``1 + 10**-i`` for ``i = 1..n``.

    Built as ``U @ diag(s) @ V.T`` where U and V are seeded signed
    permutations, so the prescribed singular values are exact and every row
    and column holds a single nonzero. Values of ``10**-i`` below double
    resolution saturate, so the smallest singular values are exactly 1.0
    once ``i`` exceeds ~16; the condition number is ~1.1 at every size.
    """
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    rng = np.random.default_rng(seed)
    sigma = 1.0 + 10.0 ** (-np.arange(1, n + 1, dtype=float))
    row_of = rng.permutation(n)
    col_of = rng.permutation(n)
    signs = rng.choice([-1.0, 1.0], size=n) * rng.choice([-1.0, 1.0], size=n)
    A = np.zeros((n, n))
    A[row_of, col_of] = sigma * signs
    x_star = np.ones(n)
    return ProblemInstance(A, A @ x_star, x_star, label=f"prescribed-{n}-{seed}")


def gen_random_spd(n: int, cond_target: float, seed: int) -> ProblemInstance:
    """SPD instance with eigenvalues log-spaced in ``[1, cond_target]``.

    ``A = Q.T @ D @ Q`` with a seeded random orthogonal Q, symmetrized to
    kill roundoff asymmetry. ``cond_target = 1`` returns the identity
    exactly.
    """
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    if cond_target < 1:
        raise ValueError(f"cond_target must be >= 1, got {cond_target}")
    if cond_target == 1.0:
        A = np.eye(n)
    else:
        rng = np.random.default_rng(seed)
        Q, _ = np.linalg.qr(rng.standard_normal((n, n)))
        d = np.logspace(0.0, np.log10(cond_target), n)
        M = (Q * d) @ Q.T
        A = (M + M.T) / 2.0
    x_star = np.ones(n)
    return ProblemInstance(A, A @ x_star, x_star, label=f"spd-{n}-{seed}")


def load_problem(matrix_path, rhs_path, label: str | None = None) -> ProblemInstance:
    """Read a problem from MatrixMarket files (the right-hand side is an
    n-by-1 array-format file)."""
    A = read_matrix_market(matrix_path)
    rhs = read_matrix_market(rhs_path)
    b = np.asarray(rhs.todense() if hasattr(rhs, "todense") else rhs, dtype=float)
    b = b.reshape(-1)
    if label is None:
        label = Path(matrix_path).stem
    return ProblemInstance(A, b, None, label=label)
