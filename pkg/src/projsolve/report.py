"""Solver run records and their CSV/JSON serialization.

Every solver in this package returns a :class:`SolveReport` built from
per-sweep :class:`SweepRecord` entries, so projection solvers and the
reference solvers can be compared row by row in the benchmark output.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "SweepRecord",
    "SolveReport",
    "material_iterations",
    "write_csv",
    "read_csv",
    "write_json",
    "read_json",
    "report_to_dict",
]

CSV_COLUMNS = [
    "solver_label",
    "iterations",
    "converged",
    "final_residual",
    "final_error",
    "elapsed_seconds",
]


@dataclass
class SweepRecord:
    """One outer sweep (or one baseline iteration).

    Attributes
    ----------
    residual_norm : float
        2-norm of the incrementally updated residual at the end of the sweep.
    step_norm : float
        ``||x_after - x_before||_2`` over the sweep.
    er_values : list of float
        Per-inner-step error reduction in the squared A-norm (orthogonal
        path only; empty otherwise).
    bound_violations : list of (int, str)
        Inner-step index and description for every recorded per-step bound
        violation (populated only when bound checking is enabled).
    """

    residual_norm: float
    step_norm: float
    er_values: list[float] = field(default_factory=list)
    bound_violations: list[tuple[int, str]] = field(default_factory=list)


@dataclass
class SolveReport:
    """Outcome of one solver run.

    ``iterations`` counts the sweeps that changed the iterate by at least the
    stopping tolerance; the final sweep that merely confirms convergence is
    not counted (see ``material_iterations``). ``final_residual`` is always
    recomputed from scratch as ``||b - A x||_2`` at exit, since the
    incrementally updated residual in the trace can drift.
    """

    solver_label: str
    iterations: int
    converged: bool
    final_residual: float
    final_error: float | None
    trace: list[SweepRecord]
    elapsed_seconds: float
    x: np.ndarray | None = None
    breakdown_reason: str | None = None


def material_iterations(trace: list[SweepRecord], stop_tol: float) -> int:
    """Number of sweeps that made material progress.

    The solvers stop at the first sweep whose step norm drops below the
    tolerance; that confirming sweep is excluded from the count.
    """
    if trace and trace[-1].step_norm < stop_tol:
        return len(trace) - 1
    return len(trace)


def _fmt(value) -> str:
    # 17 significant digits round-trip any binary64 exactly.
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return format(value, ".17g")
    return str(value)


def write_csv(reports: list[SolveReport], path) -> None:
    """Write one summary row per report (no trace)."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(CSV_COLUMNS)
        for rep in reports:
            writer.writerow(
                [
                    rep.solver_label,
                    rep.iterations,
                    _fmt(rep.converged),
                    _fmt(rep.final_residual),
                    _fmt(rep.final_error),
                    _fmt(rep.elapsed_seconds),
                ]
            )


def read_csv(path) -> list[dict]:
    """Parse a summary CSV back into typed row dictionaries."""
    rows = []
    with open(path, newline="") as fh:
        for row in csv.DictReader(fh):
            rows.append(
                {
                    "solver_label": row["solver_label"],
                    "iterations": int(row["iterations"]),
                    "converged": row["converged"] == "true",
                    "final_residual": float(row["final_residual"]),
                    "final_error": (
                        float(row["final_error"]) if row["final_error"] else None
                    ),
                    "elapsed_seconds": float(row["elapsed_seconds"]),
                }
            )
    return rows


def report_to_dict(report: SolveReport) -> dict:
    """Plain-data view of a report; floats serialize with full precision."""
    return {
        "solver_label": report.solver_label,
        "iterations": report.iterations,
        "converged": report.converged,
        "final_residual": report.final_residual,
        "final_error": report.final_error,
        "elapsed_seconds": report.elapsed_seconds,
        "breakdown_reason": report.breakdown_reason,
        "x": None if report.x is None else [float(v) for v in report.x],
        "trace": [
            {
                "residual_norm": rec.residual_norm,
                "step_norm": rec.step_norm,
                "er_values": list(rec.er_values),
                "bound_violations": [[int(i), str(d)] for i, d in rec.bound_violations],
            }
            for rec in report.trace
        ],
    }


def write_json(reports: list[SolveReport], path) -> None:
    with open(path, "w") as fh:
        json.dump([report_to_dict(r) for r in reports], fh, indent=1)
        fh.write("\n")


def read_json(path) -> list[dict]:
    with open(path) as fh:
        return json.load(fh)
