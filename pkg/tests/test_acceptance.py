"""Acceptance suite.

Each test prints one PASS/FAIL line (run with ``pytest -s`` to see them all);
tolerances are fixed here and match the package's documented guarantees.
"""

import numpy as np
import pytest

from projsolve.baselines import BaselineConfig, solve_gauss_seidel, solve_gmres
from projsolve.bench import reproduce_tables
from projsolve.problems import (
    ProblemInstance,
    gen_hankel,
    gen_prescribed_singular,
    gen_random_spd,
)
from projsolve.projection import SolverConfig, oblique_step, orthogonal_step, solve

MASTER_SEED = 20240901


def verdict(name, ok, detail=""):
    print(f"\n[{name}] {'PASS' if ok else 'FAIL'} {detail}")
    assert ok, f"{name}: {detail}"


@pytest.fixture(scope="module")
def tables_first_run():
    return reproduce_tables()


@pytest.fixture(scope="module")
def random_square_instances():
    """200 seeded random non-singular matrices, n <= 30, sigma ratio >= 1e-6."""
    rng = np.random.default_rng(MASTER_SEED)
    instances = []
    while len(instances) < 200:
        n = int(rng.integers(2, 31))
        A = rng.standard_normal((n, n))
        s = np.linalg.svd(A, compute_uv=False)
        if s[-1] / s[0] < 1e-6:
            continue
        instances.append(A)
    return instances


@pytest.fixture(scope="module")
def bound_check_violations(random_square_instances):
    """Run greedy oblique sweeps over every instance and m, collecting the
    per-step bound violations recorded by the solver (m > n clamps to n)."""
    contraction, drop, steps = [], [], 0
    for k, A in enumerate(random_square_instances):
        n = A.shape[0]
        prob = ProblemInstance(A, A @ np.ones(n), np.ones(n), label=f"rand-{k}")
        for m in sorted({min(1, n), min(2, n), min(5, n), n}):
            cfg = SolverConfig(m=m, check_bounds=True, max_outer=3)
            report = solve(prob, cfg)
            for rec in report.trace:
                steps += n
                for inner, description in rec.bound_violations:
                    entry = (k, m, inner, description)
                    if "contraction" in description:
                        contraction.append(entry)
                    else:
                        drop.append(entry)
    return contraction, drop, steps


def test_criterion_1_table1_reproduction(tables_first_run):
    """Hankel n=100: OPM m in {6,10,50} within +-1 of 14/8/2 with recomputed
    residuals <= 1e-10; CGNR 9+-1, Craig 9+-1, GMRES 10+-2; under 5 s."""
    rows = {row.label: row for row in tables_first_run.table1}
    failures = []
    for label, tol in (
        ("opm-oblique m=6", 1),
        ("opm-oblique m=10", 1),
        ("opm-oblique m=50", 1),
    ):
        row = rows[label]
        if abs(row.iterations - row.paper_iterations) > tol:
            failures.append(f"{label}: {row.iterations} vs {row.paper_iterations}")
        if row.residual > 1e-10:
            failures.append(f"{label}: residual {row.residual:.2e} > 1e-10")
    for label, tol in (("cgnr", 1), ("craig", 1), ("gmres", 2)):
        row = rows[label]
        if abs(row.iterations - row.paper_iterations) > tol:
            failures.append(f"{label}: {row.iterations} vs {row.paper_iterations}")
    elapsed = sum(r.elapsed_seconds for r in tables_first_run.reports1)
    if elapsed >= 5.0:
        failures.append(f"runtime {elapsed:.2f}s >= 5s")
    counts = {label: rows[label].iterations for label in rows}
    verdict(
        "criterion 1: Table 1 reproduction",
        not failures,
        f"iterations={counts}, runtime={elapsed:.2f}s "
        + ("" if not failures else "; ".join(failures)),
    )


def test_criterion_2_table2_reproduction(tables_first_run):
    """Prescribed n=400: 4D-OPM in exactly 1 sweep; CGNR/Craig 6+-1; under 10 s."""
    rows = {row.label: row for row in tables_first_run.table2}
    failures = []
    opm = rows["opm-oblique m=4"]
    if opm.iterations != 1:
        failures.append(f"opm-oblique m=4 took {opm.iterations} sweeps, need exactly 1")
    if opm.residual > 1e-12:
        failures.append(f"opm-oblique m=4 residual {opm.residual:.2e} > 1e-12")
    for label in ("cgnr", "craig"):
        row = rows[label]
        if abs(row.iterations - row.paper_iterations) > 1:
            failures.append(f"{label}: {row.iterations} vs {row.paper_iterations}")
    elapsed = sum(r.elapsed_seconds for r in tables_first_run.reports2)
    if elapsed >= 10.0:
        failures.append(f"runtime {elapsed:.2f}s >= 10s")
    verdict(
        "criterion 2: Table 2 reproduction",
        not failures,
        f"opm iterations={opm.iterations}, residual={opm.residual:.2e}, "
        f"runtime={elapsed:.2f}s " + ("" if not failures else "; ".join(failures)),
    )


def test_criterion_3_contraction_bound_suite(bound_check_violations):
    """Every oblique inner step obeys ||r'||^2 <= (1 - s_n^2/s_1^2)||r||^2
    within 1e-8 relative slack; zero violations over the 200-instance suite."""
    contraction, _, steps = bound_check_violations
    verdict(
        "criterion 3: residual contraction property",
        not contraction,
        f"{len(contraction)} violations over {steps} steps"
        + (f", first: {contraction[0]}" if contraction else ""),
    )


def test_criterion_4_step_drop_bound_suite(bound_check_violations):
    """Every step obeys ||r||^2 - ||r'||^2 >= ||W.T r||^2 / s_1^2 within
    1e-8 relative slack; zero violations."""
    _, drop, steps = bound_check_violations
    verdict(
        "criterion 4: per-step drop bound",
        not drop,
        f"{len(drop)} violations over {steps} steps"
        + (f", first: {drop[0]}" if drop else ""),
    )


def test_criterion_5_error_reduction_monotonicity():
    """SPD path: along nested index chains from a random permutation the
    error reduction never increases beyond 1e-10 slack; 200 instances."""
    rng = np.random.default_rng(MASTER_SEED + 1)
    violations = 0
    checked = 0
    for _ in range(200):
        n = int(rng.integers(2, 21))
        cond = float(10 ** rng.uniform(0, 3))
        prob = gen_random_spd(n, cond, int(rng.integers(1 << 30)))
        A = prob.A
        b = rng.standard_normal(n)
        perm = rng.permutation(n)
        previous = np.inf
        for size in range(1, n + 1):
            idx = np.sort(perm[:size])
            out = orthogonal_step(A, b, np.zeros(n), b.copy(), idx)
            checked += 1
            if out.er_value > previous + 1e-10:
                violations += 1
            previous = out.er_value
    verdict(
        "criterion 5: nested error-reduction monotonicity",
        violations == 0,
        f"{violations} violations over {checked} chain links",
    )


def test_criterion_6_normal_equations_equivalence():
    """oblique_step on (A, b) equals orthogonal_step on (A.T A, A.T b) with
    the same index set, to 1e-10 in x_new; 100 instances, n <= 15."""
    rng = np.random.default_rng(77)
    worst = 0.0
    for _ in range(100):
        n = int(rng.integers(2, 16))
        A = rng.standard_normal((n, n))
        b = rng.standard_normal(n)
        x = rng.standard_normal(n)
        m = int(rng.integers(1, n + 1))
        idx = np.sort(rng.choice(n, size=m, replace=False))
        ob = oblique_step(A, b, x, b - A @ x, idx)
        B = A.T @ A
        orth = orthogonal_step(B, A.T @ b, x, A.T @ b - B @ x, idx)
        worst = max(worst, float(np.max(np.abs(ob.x_new - orth.x_new))))
    verdict(
        "criterion 6: normal-equations equivalence",
        worst <= 1e-10,
        f"worst deviation {worst:.3e}",
    )


def test_criterion_7_full_subspace_exactness():
    """m = n solves in one inner step (residual <= 1e-10 ||b||) on every
    generated instance with n <= 10; full GMRES terminates within n
    iterations at the same residual level."""
    failures = []
    for n in range(2, 11):
        instances = [
            gen_hankel(n),
            gen_prescribed_singular(n, seed=5),
            gen_random_spd(n, 10.0, seed=n),
        ]
        for prob in instances:
            bound = 1e-10 * np.linalg.norm(prob.b)
            idx = np.arange(n)
            out = oblique_step(prob.A, prob.b, np.zeros(n), prob.b.copy(), idx)
            if np.linalg.norm(out.r_new) > bound:
                failures.append(f"oblique m=n on {prob.label}")
            gm = solve_gmres(prob)
            if not (gm.converged and gm.iterations <= n and gm.final_residual <= bound):
                failures.append(f"gmres on {prob.label}: {gm.iterations} its")
        # orthogonal full-space step needs an SPD instance
        spd = instances[2]
        out = orthogonal_step(spd.A, spd.b, np.zeros(n), spd.b.copy(), np.arange(n))
        if np.linalg.norm(out.r_new) > 1e-10 * np.linalg.norm(spd.b):
            failures.append(f"orthogonal m=n on {spd.label}")
    verdict(
        "criterion 7: full-subspace exactness",
        not failures,
        "; ".join(failures) if failures else "27 instances, both step kinds + GMRES",
    )


def test_criterion_8_gauss_seidel_equivalence():
    """One Gauss-Seidel sweep matches one 1-D cyclic orthogonal sweep to
    1e-12 on 20 seeded SPD instances."""
    rng = np.random.default_rng(MASTER_SEED + 2)
    worst = 0.0
    for _ in range(20):
        n = int(rng.integers(2, 16))
        cond = float(10 ** rng.uniform(0, 3))
        prob = gen_random_spd(n, cond, int(rng.integers(1 << 30)))
        gs = solve_gauss_seidel(prob, BaselineConfig(max_iter=1))
        opm = solve(
            prob,
            SolverConfig(m=1, method="orthogonal", index_strategy="cyclic", max_outer=1),
        )
        worst = max(worst, float(np.max(np.abs(gs.x - opm.x))))
    verdict(
        "criterion 8: Gauss-Seidel equivalence",
        worst <= 1e-12,
        f"worst deviation {worst:.3e}",
    )


def test_criterion_9_tables_determinism(tables_first_run):
    """A second tables run reproduces every iteration count and every
    residual bit for bit."""
    second = reproduce_tables()
    mismatches = []
    for first_rows, second_rows in (
        (tables_first_run.table1, second.table1),
        (tables_first_run.table2, second.table2),
    ):
        for a, b in zip(first_rows, second_rows):
            if a.iterations != b.iterations:
                mismatches.append(f"{a.label}: iterations {a.iterations} != {b.iterations}")
            if a.residual != b.residual:
                mismatches.append(f"{a.label}: residual {a.residual!r} != {b.residual!r}")
    verdict(
        "criterion 9: determinism",
        not mismatches,
        "; ".join(mismatches) if mismatches else "both tables identical across runs",
    )
