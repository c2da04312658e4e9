"""Reference solvers: CGNR, Craig's method (CGNE), GMRES and Gauss-Seidel.

All four use the same stopping rule as the projection solvers — stop at the
first iteration whose step ``||x_{k+1} - x_k||`` falls below the tolerance,
excluding that confirming iteration from the count — so iteration counts
are directly comparable across methods.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np
import scipy.linalg
import scipy.sparse

from .linalg import matvec
from .problems import ProblemInstance
from .report import SolveReport, SweepRecord, material_iterations

__all__ = [
    "BaselineConfig",
    "solve_cgnr",
    "solve_craig",
    "solve_gmres",
    "solve_gauss_seidel",
    "solve_baseline",
]


@dataclass
class BaselineConfig:
    method: str | None = None  # "cgnr" | "craig" | "gmres" | "gauss_seidel"
    stop_tol: float = 1e-12
    max_iter: int = 10_000
    gmres_restart: int | None = None  # None = full GMRES

    def __post_init__(self):
        if self.stop_tol <= 0:
            raise ValueError("stop_tol must be positive")
        if self.max_iter < 1:
            raise ValueError("max_iter must be positive")
        if self.gmres_restart is not None and self.gmres_restart < 1:
            raise ValueError("gmres_restart must be positive")


def _finish(label, problem, x, trace, converged, stop_tol, t0, reason=None):
    final_error = None
    if problem.x_star is not None:
        final_error = float(np.linalg.norm(x - problem.x_star))
    return SolveReport(
        solver_label=label,
        iterations=material_iterations(trace, stop_tol),
        converged=converged,
        final_residual=float(np.linalg.norm(problem.b - matvec(problem.A, x))),
        final_error=final_error,
        trace=trace,
        elapsed_seconds=time.perf_counter() - t0,
        x=x,
        breakdown_reason=reason,
    )


def solve_cgnr(
    problem: ProblemInstance,
    config: BaselineConfig | None = None,
    x0: np.ndarray | None = None,
) -> SolveReport:
    """Conjugate gradient on the normal equations ``A.T A x = A.T b``."""
    cfg = config or BaselineConfig()
    A, b = problem.A, problem.b
    t0 = time.perf_counter()
    x = np.zeros(problem.n) if x0 is None else np.asarray(x0, dtype=float).copy()
    r = b - matvec(A, x)
    z = A.T @ r
    p = z.copy()
    zz = float(z @ z)
    trace: list[SweepRecord] = []
    converged = False
    reason = None
    for _ in range(cfg.max_iter):
        w = A @ p
        ww = float(w @ w)
        if ww == 0.0:
            # Zero direction: convergence if the residual is already
            # negligible, otherwise a genuine breakdown.
            if np.linalg.norm(r) <= cfg.stop_tol * max(1.0, np.linalg.norm(b)):
                converged = True
            else:
                reason = "breakdown: zero direction norm"
            break
        alpha = zz / ww
        x = x + alpha * p
        r = r - alpha * w
        step = abs(alpha) * float(np.linalg.norm(p))
        trace.append(SweepRecord(float(np.linalg.norm(r)), step))
        if step < cfg.stop_tol:
            converged = True
            break
        z = A.T @ r
        zz_new = float(z @ z)
        beta = zz_new / zz
        zz = zz_new
        p = z + beta * p
    return _finish("cgnr", problem, x, trace, converged, cfg.stop_tol, t0, reason)


def solve_craig(
    problem: ProblemInstance,
    config: BaselineConfig | None = None,
    x0: np.ndarray | None = None,
) -> SolveReport:
    """Craig's method (CGNE): conjugate gradient on ``A A.T u = b`` with
    ``x = A.T u``; minimizes the error 2-norm at each step."""
    cfg = config or BaselineConfig()
    A, b = problem.A, problem.b
    t0 = time.perf_counter()
    x = np.zeros(problem.n) if x0 is None else np.asarray(x0, dtype=float).copy()
    r = b - matvec(A, x)
    p = A.T @ r
    rr = float(r @ r)
    trace: list[SweepRecord] = []
    converged = False
    reason = None
    for _ in range(cfg.max_iter):
        pp = float(p @ p)
        if pp == 0.0:
            if np.linalg.norm(r) <= cfg.stop_tol * max(1.0, np.linalg.norm(b)):
                converged = True
            else:
                reason = "breakdown: zero direction norm"
            break
        alpha = rr / pp
        x = x + alpha * p
        r = r - alpha * (A @ p)
        step = abs(alpha) * np.sqrt(pp)
        trace.append(SweepRecord(float(np.linalg.norm(r)), step))
        if step < cfg.stop_tol:
            converged = True
            break
        rr_new = float(r @ r)
        beta = rr_new / rr
        rr = rr_new
        p = A.T @ r + beta * p
    return _finish("craig", problem, x, trace, converged, cfg.stop_tol, t0, reason)


def solve_gmres(
    problem: ProblemInstance,
    config: BaselineConfig | None = None,
    x0: np.ndarray | None = None,
) -> SolveReport:
    """GMRES with modified Gram-Schmidt Arnoldi and Givens rotations.

    Full (non-restarted) by default: one Krylov cycle of up to n vectors,
    which terminates exactly in at most n steps. A happy breakdown is
    treated as exact convergence. Setting ``gmres_restart`` bounds the cycle
    length and restarts until ``max_iter`` total iterations.
    """
    cfg = config or BaselineConfig()
    A, b = problem.A, problem.b
    n = problem.n
    t0 = time.perf_counter()
    x = np.zeros(n) if x0 is None else np.asarray(x0, dtype=float).copy()
    cycle = min(n if cfg.gmres_restart is None else cfg.gmres_restart, cfg.max_iter)
    trace: list[SweepRecord] = []
    converged = False
    reason = None
    total = 0
    label = "gmres" if cfg.gmres_restart is None else f"gmres restart={cfg.gmres_restart}"

    while total < cfg.max_iter and not converged and reason is None:
        r = b - matvec(A, x)
        beta = float(np.linalg.norm(r))
        if beta == 0.0:
            converged = True
            break
        Q = np.zeros((n, cycle + 1))
        H = np.zeros((cycle + 1, cycle))
        cs = np.zeros(cycle)
        sn = np.zeros(cycle)
        g = np.zeros(cycle + 1)
        Q[:, 0] = r / beta
        g[0] = beta
        x_cycle = x.copy()
        x_prev = x.copy()
        for k in range(cycle):
            if total >= cfg.max_iter:
                break
            v = matvec(A, Q[:, k])
            for j in range(k + 1):
                H[j, k] = float(Q[:, j] @ v)
                v -= H[j, k] * Q[:, j]
            H[k + 1, k] = float(np.linalg.norm(v))
            happy = H[k + 1, k] <= 1e-14 * beta
            if not happy:
                Q[:, k + 1] = v / H[k + 1, k]
            for j in range(k):
                t = cs[j] * H[j, k] + sn[j] * H[j + 1, k]
                H[j + 1, k] = -sn[j] * H[j, k] + cs[j] * H[j + 1, k]
                H[j, k] = t
            nu = np.hypot(H[k, k], H[k + 1, k])
            if nu == 0.0:
                reason = "breakdown: zero Hessenberg column"
                break
            cs[k] = H[k, k] / nu
            sn[k] = H[k + 1, k] / nu
            H[k, k] = nu
            H[k + 1, k] = 0.0
            g[k + 1] = -sn[k] * g[k]
            g[k] = cs[k] * g[k]
            y = scipy.linalg.solve_triangular(H[: k + 1, : k + 1], g[: k + 1])
            x = x_cycle + Q[:, : k + 1] @ y
            total += 1
            step = float(np.linalg.norm(x - x_prev))
            x_prev = x.copy()
            trace.append(SweepRecord(abs(float(g[k + 1])), step))
            if happy:
                converged = True
                break
            if step < cfg.stop_tol:
                converged = True
                break
    return _finish(label, problem, x, trace, converged, cfg.stop_tol, t0, reason)


def solve_gauss_seidel(
    problem: ProblemInstance,
    config: BaselineConfig | None = None,
    x0: np.ndarray | None = None,
) -> SolveReport:
    """Classical forward Gauss-Seidel sweeps.

    Requires a nonzero diagonal; convergence is only guaranteed for SPD or
    diagonally dominant matrices. One sweep coincides with a one-dimensional
    cyclic orthogonal projection sweep.
    """
    cfg = config or BaselineConfig()
    A = problem.A
    if scipy.sparse.issparse(A):
        A = np.asarray(A.todense())  # row access dominates; densify up front
    b = problem.b
    n = problem.n
    diag = np.diag(A)
    if np.any(diag == 0.0):
        raise ValueError("Gauss-Seidel requires a nonzero diagonal")
    t0 = time.perf_counter()
    x = np.zeros(n) if x0 is None else np.asarray(x0, dtype=float).copy()
    trace: list[SweepRecord] = []
    converged = False
    for _ in range(cfg.max_iter):
        x_before = x.copy()
        for i in range(n):
            x[i] += (b[i] - A[i, :] @ x) / diag[i]
        step = float(np.linalg.norm(x - x_before))
        trace.append(SweepRecord(float(np.linalg.norm(b - A @ x)), step))
        if step < cfg.stop_tol:
            converged = True
            break
    return _finish("gauss-seidel", problem, x, trace, converged, cfg.stop_tol, t0)


_DISPATCH = {
    "cgnr": solve_cgnr,
    "craig": solve_craig,
    "gmres": solve_gmres,
    "gauss_seidel": solve_gauss_seidel,
}


def solve_baseline(problem: ProblemInstance, config: BaselineConfig) -> SolveReport:
    """Dispatch on ``config.method``."""
    try:
        fn = _DISPATCH[config.method]
    except KeyError:
        raise ValueError(f"unknown baseline method {config.method!r}") from None
    return fn(problem, config)
