"""m-dimensional orthogonal and oblique projection solvers.

Each inner step searches the coordinate subspace spanned by identity
columns ``e_{i_1}, ..., e_{i_m}``. The orthogonal variant (for SPD
matrices) constrains the new residual against the same subspace and
minimizes the A-norm of the error; the oblique variant constrains against
``A`` times the subspace and minimizes the residual 2-norm over the step,
which is what makes it applicable to any non-singular matrix.

An outer sweep performs n inner steps, re-selecting the index set before
each one; the run stops once a whole sweep moves the iterate by less than
the stopping tolerance. Index sets are 0-based throughout.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np
import scipy.sparse

from .linalg import (
    SpectralBounds,
    matvec,
    singular_extremes,
    solve_least_squares,
    solve_spd_small,
)
from .problems import ProblemInstance
from .report import SolveReport, SweepRecord, material_iterations

__all__ = [
    "StepOutcome",
    "SolverConfig",
    "select_indices",
    "orthogonal_step",
    "oblique_step",
    "solve",
    "contraction_bound",
    "check_step_bound",
    "BOUND_SLACK",
    "STAGNATION_REL_TOL",
]

# Relative slack allowed before a per-step bound counts as violated.
BOUND_SLACK = 1e-8
# A step whose projected residual is this small relative to ||r|| is skipped
# rather than solving a numerically null system.
STAGNATION_REL_TOL = 1e-15


@dataclass
class StepOutcome:
    """Result of one projection step.

    ``correction`` is the m-vector of coefficients on the selected
    coordinates; ``residual_drop_sq`` is ``||r||^2 - ||r_new||^2`` (always
    nonnegative for oblique steps; orthogonal steps may grow the 2-norm
    residual even while they shrink the A-norm error). ``er_value`` is the
    change in squared A-norm error and is populated on the orthogonal path
    only.
    """

    x_new: np.ndarray
    r_new: np.ndarray
    correction: np.ndarray
    residual_drop_sq: float
    er_value: float | None = None


@dataclass
class SolverConfig:
    m: int
    method: str = "oblique"  # "orthogonal" | "oblique"
    index_strategy: str = "greedy"  # "cyclic" | "greedy"
    stop_tol: float = 1e-12
    max_outer: int = 10_000
    check_bounds: bool = False

    def __post_init__(self):
        if self.m < 1:
            raise ValueError(f"m must be positive, got {self.m}")
        if self.method not in ("orthogonal", "oblique"):
            raise ValueError(f"unknown method {self.method!r}")
        if self.index_strategy not in ("cyclic", "greedy"):
            raise ValueError(f"unknown index strategy {self.index_strategy!r}")
        if self.stop_tol <= 0:
            raise ValueError("stop_tol must be positive")
        if self.max_outer < 1:
            raise ValueError("max_outer must be positive")


def _validate_indices(idx, n: int) -> np.ndarray:
    idx = np.asarray(idx, dtype=int)
    if idx.ndim != 1 or idx.size == 0:
        raise ValueError("index set must be a non-empty 1-D sequence")
    if np.any(np.diff(idx) <= 0):
        raise ValueError(f"index set must be strictly increasing, got {idx}")
    if idx[0] < 0 or idx[-1] >= n:
        raise ValueError(f"index set {idx} out of range [0, {n})")
    return idx


def select_indices(strategy: str, A, r: np.ndarray, m: int, cursor: int = 0) -> np.ndarray:
    """Choose the m coordinates for the next projection step.

    cyclic
        The m consecutive positions starting at ``cursor``, wrapped modulo n
        and returned in ascending order; sweeping ``cursor`` over 0..n-1
        touches every coordinate exactly m times per sweep.
    greedy
        The m indices with the largest ``|A.T @ r|`` entries (the steepest
        descent coordinates for the normal equations), ties broken toward
        the lowest index.
    """
    n = A.shape[1]
    if not 1 <= m <= n:
        raise ValueError(f"need 1 <= m <= n, got m={m}, n={n}")
    if strategy == "cyclic":
        idx = (cursor + np.arange(m)) % n
    elif strategy == "greedy":
        score = np.abs(A.T @ r)
        if scipy.sparse.issparse(A):
            score = np.asarray(score).reshape(-1)
        idx = np.argsort(-score, kind="stable")[:m]
    else:
        raise ValueError(f"unknown index strategy {strategy!r}")
    return np.sort(idx).astype(int)


def _principal_submatrix(A, idx: np.ndarray) -> np.ndarray:
    if scipy.sparse.issparse(A):
        return np.asarray(A[idx][:, idx].todense())
    return A[np.ix_(idx, idx)]


def _column_block(A, idx: np.ndarray):
    return A[:, idx]


def orthogonal_step(A, b, x, r, idx) -> StepOutcome:
    """One Galerkin step on the coordinates in ``idx`` (A must be SPD).

    Solves the projected system ``A[idx, idx] z = r[idx]`` and updates the
    selected coordinates; the new residual is orthogonal to the selected
    identity columns. The returned ``er_value = -(r[idx] @ z)`` equals the
    change in squared A-norm error, and is <= 0.
    """
    n = A.shape[0]
    idx = _validate_indices(idx, n)
    p = r[idx]
    B = _principal_submatrix(A, idx)
    z = solve_spd_small(B, p)
    x_new = x.copy()
    x_new[idx] += z
    r_new = r - _column_block(A, idx) @ z
    drop = float(r @ r - r_new @ r_new)
    return StepOutcome(x_new, r_new, z, drop, er_value=float(-(p @ z)))


def oblique_step(A, b, x, r, idx) -> StepOutcome:
    """One residual-minimizing step on the coordinates in ``idx``.

    With ``W = A[:, idx]``, computes the least-squares coefficients
    ``y = argmin ||W y - r||`` and updates ``x[idx] += y``,
    ``r -= W @ y``. The new residual is orthogonal to the columns of W
    (Petrov-Galerkin), and ``residual_drop_sq = r @ (W @ y) >= 0``, so the
    residual 2-norm never increases.
    """
    n = A.shape[0]
    idx = _validate_indices(idx, n)
    W = _column_block(A, idx)
    y = solve_least_squares(W, r)
    x_new = x.copy()
    x_new[idx] += y
    Wy = W @ y
    r_new = r - Wy
    return StepOutcome(x_new, r_new, y, float(r @ Wy), er_value=None)


def contraction_bound(A) -> float:
    """Worst-case per-step residual contraction factor ``1 - (s_min/s_max)^2``.

    Raises ``numpy.linalg.LinAlgError`` when the matrix is numerically
    singular (``s_min < 1e-14 * s_max``).
    """
    ext = singular_extremes(A)
    if ext.sigma_min < 1e-14 * ext.sigma_max:
        raise np.linalg.LinAlgError(
            f"matrix is numerically singular: sigma_min={ext.sigma_min:.3e}, "
            f"sigma_max={ext.sigma_max:.3e}"
        )
    return max(0.0, 1.0 - (ext.sigma_min / ext.sigma_max) ** 2)


def check_step_bound(
    A_extremes: SpectralBounds,
    r_before: np.ndarray,
    r_after: np.ndarray,
    y: np.ndarray,
) -> bool:
    """Per-step drop check ``||r||^2 - ||r'||^2 >= ||y||^2 / s_max^2`` with
    relative slack, where ``y = W.T @ r_before``."""
    rr = float(r_before @ r_before)
    drop = rr - float(r_after @ r_after)
    return drop >= float(y @ y) / A_extremes.sigma_max**2 - BOUND_SLACK * rr


def solve(
    problem: ProblemInstance, config: SolverConfig, x0: np.ndarray | None = None
) -> SolveReport:
    """Run outer sweeps of n inner projection steps until the iterate stalls.

    Each inner step re-selects its index set (for the cyclic strategy the
    cursor is the inner-step number). The run converges when a whole sweep
    changes x by less than ``config.stop_tol``; that confirming sweep is
    excluded from ``iterations``. With ``check_bounds`` set, every oblique
    inner step is tested against the per-step drop bound and the residual
    contraction bound, and violations beyond the relative slack are recorded
    in the trace. Steps whose projected residual is negligible relative to
    ``||r||`` are skipped as zero corrections.
    """
    A, b = problem.A, problem.b
    n = problem.n
    if A.shape[0] != A.shape[1]:
        raise ValueError(f"A must be square, got shape {A.shape}")
    if not 1 <= config.m <= n:
        raise ValueError(f"need 1 <= m <= n, got m={config.m}, n={n}")

    t0 = time.perf_counter()
    x = np.zeros(n) if x0 is None else np.asarray(x0, dtype=float).copy()
    r = b - matvec(A, x)
    orthogonal = config.method == "orthogonal"
    step_fn = orthogonal_step if orthogonal else oblique_step

    extremes = None
    rho = None
    if config.check_bounds and not orthogonal:
        extremes = singular_extremes(A)
        rho = 1.0 - (extremes.sigma_min / extremes.sigma_max) ** 2

    trace: list[SweepRecord] = []
    converged = False
    for _ in range(config.max_outer):
        x_before = x.copy()
        er_values: list[float] = []
        violations: list[tuple[int, str]] = []
        for i in range(n):
            idx = select_indices(config.index_strategy, A, r, config.m, cursor=i)
            if orthogonal:
                proj = r[idx]
            else:
                proj = _column_block(A, idx).T @ r
                if scipy.sparse.issparse(A):
                    proj = np.asarray(proj).reshape(-1)
            r_norm = np.linalg.norm(r)
            if np.linalg.norm(proj) < STAGNATION_REL_TOL * r_norm:
                if orthogonal:
                    er_values.append(0.0)
                continue
            out = step_fn(A, b, x, r, idx)
            if extremes is not None:
                rr = float(r @ r)
                # The relative slack is the yardstick; once 1e-8 * ||r||^2
                # underflows to zero there is no representable scale left to
                # measure a violation against.
                if BOUND_SLACK * rr != 0.0:
                    if not check_step_bound(extremes, r, out.r_new, proj):
                        violations.append(
                            (i, "per-step drop below ||W.T r||^2 / sigma_max^2")
                        )
                    if float(out.r_new @ out.r_new) > rho * rr + BOUND_SLACK * rr:
                        violations.append(
                            (i, "residual contraction factor exceeded")
                        )
            x, r = out.x_new, out.r_new
            if orthogonal:
                er_values.append(out.er_value)
        step_norm = float(np.linalg.norm(x - x_before))
        trace.append(
            SweepRecord(
                residual_norm=float(np.linalg.norm(r)),
                step_norm=step_norm,
                er_values=er_values,
                bound_violations=violations,
            )
        )
        if step_norm < config.stop_tol:
            converged = True
            break

    elapsed = time.perf_counter() - t0
    final_residual = float(np.linalg.norm(b - matvec(A, x)))
    final_error = None
    if problem.x_star is not None:
        final_error = float(np.linalg.norm(x - problem.x_star))
    label = f"opm-{config.method} m={config.m} {config.index_strategy}"
    return SolveReport(
        solver_label=label,
        iterations=material_iterations(trace, config.stop_tol),
        converged=converged,
        final_residual=final_residual,
        final_error=final_error,
        trace=trace,
        elapsed_seconds=elapsed,
        x=x,
    )
