"""Projection iterative solvers for non-singular linear systems.

A library of m-dimensional orthogonal (SPD) and oblique (general
non-singular) projection solvers with per-step bound instrumentation,
reference solvers (CGNR, Craig, GMRES, Gauss-Seidel), benchmark problem
generators, MatrixMarket I/O, and a benchmark CLI.
"""

from .baselines import (
    BaselineConfig,
    solve_baseline,
    solve_cgnr,
    solve_craig,
    solve_gauss_seidel,
    solve_gmres,
)
from .bench import RunSpec, parse_runspec, reproduce_tables, run
from .linalg import (
    SpectralBounds,
    a_norm_sq,
    matvec,
    singular_extremes,
    solve_least_squares,
    solve_spd_small,
)
from .mmio import MatrixMarketError, read_matrix_market, write_matrix_market
from .problems import (
    ProblemInstance,
    gen_hankel,
    gen_prescribed_singular,
    gen_random_spd,
    load_problem,
)
from .projection import (
    SolverConfig,
    StepOutcome,
    check_step_bound,
    contraction_bound,
    oblique_step,
    orthogonal_step,
    select_indices,
    solve,
)
from .report import SolveReport, SweepRecord, read_csv, read_json, write_csv, write_json

__version__ = "0.1.0"

__all__ = [
    "BaselineConfig",
    "MatrixMarketError",
    "ProblemInstance",
    "RunSpec",
    "SolveReport",
    "SolverConfig",
    "SpectralBounds",
    "StepOutcome",
    "SweepRecord",
    "a_norm_sq",
    "check_step_bound",
    "contraction_bound",
    "gen_hankel",
    "gen_prescribed_singular",
    "gen_random_spd",
    "load_problem",
    "matvec",
    "oblique_step",
    "orthogonal_step",
    "parse_runspec",
    "read_csv",
    "read_json",
    "read_matrix_market",
    "reproduce_tables",
    "run",
    "select_indices",
    "singular_extremes",
    "solve",
    "solve_baseline",
    "solve_cgnr",
    "solve_craig",
    "solve_gauss_seidel",
    "solve_gmres",
    "solve_least_squares",
    "solve_spd_small",
    "write_csv",
    "write_json",
    "write_matrix_market",
]
