"""Command-line interface.

Subcommands::

    projsolve run --spec FILE --out FILE [--format csv|json] [--no-plots]
    projsolve tables [--out FILE] [--no-plots]
    projsolve gen --problem hankel|prescribed|spd --n N [--seed S] [--cond C] --out FILE.mtx

Exit status: 0 when every run converged, 1 when any run failed to
converge, 2 on usage or I/O errors. ``run`` and ``tables`` render a
convergence figure (PNG) next to each written output file unless
``--no-plots`` is given.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import bench
from .mmio import write_matrix_market
from .plots import save_convergence_plot
from .problems import gen_hankel, gen_prescribed_singular, gen_random_spd
from .report import write_csv, write_json

__all__ = ["main"]


def _cmd_run(args) -> int:
    spec = bench.parse_runspec(args.spec)
    out = args.out or spec.output
    if out is None:
        print("error: no output path (--out or an 'output' key in the spec)",
              file=sys.stderr)
        return 2
    fmt = args.format or spec.format
    reports = bench.run(spec)
    if fmt == "json":
        write_json(reports, out)
    else:
        write_csv(reports, out)
    if not args.no_plots:
        png = Path(out).with_suffix("").as_posix() + "_convergence.png"
        save_convergence_plot(reports, png)
    for rep in reports:
        status = "converged" if rep.converged else "NOT CONVERGED"
        print(
            f"{rep.solver_label}: {rep.iterations} iterations, "
            f"residual {rep.final_residual:.4e}, {status}"
        )
    print(f"wrote {out}")
    return 0 if all(r.converged for r in reports) else 1


def _cmd_tables(args) -> int:
    result = bench.reproduce_tables()
    print(result.text)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(result.text)
        if not args.no_plots:
            stem = Path(args.out).with_suffix("").as_posix()
            save_convergence_plot(result.reports1, stem + "_table1.png",
                                  title="hankel n=100")
            save_convergence_plot(result.reports2, stem + "_table2.png",
                                  title="prescribed n=400")
        print(f"wrote {args.out}")
    return 0


def _cmd_gen(args) -> int:
    if args.problem == "hankel":
        problem = gen_hankel(args.n)
    elif args.problem == "prescribed":
        problem = gen_prescribed_singular(args.n, args.seed)
    else:
        problem = gen_random_spd(args.n, args.cond, args.seed)
    write_matrix_market(args.out, problem.A, comment=problem.label)
    rhs_path = Path(args.out).with_suffix("").as_posix() + ".rhs.mtx"
    write_matrix_market(rhs_path, problem.b, comment=f"{problem.label} rhs")
    print(f"wrote {args.out} and {rhs_path}")
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="projsolve",
        description="Projection solvers and benchmark harness for Ax = b.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run the solvers named in a spec file")
    p_run.add_argument("--spec", required=True, help="run-spec file (key = value)")
    p_run.add_argument("--out", help="output report path")
    p_run.add_argument("--format", choices=("csv", "json"), default=None)
    p_run.add_argument("--no-plots", action="store_true",
                       help="skip the convergence figure")
    p_run.set_defaults(func=_cmd_run)

    p_tab = sub.add_parser("tables", help="reproduce the reference result tables")
    p_tab.add_argument("--out", help="write the text report here")
    p_tab.add_argument("--no-plots", action="store_true")
    p_tab.set_defaults(func=_cmd_tables)

    p_gen = sub.add_parser("gen", help="write a generated problem as MatrixMarket")
    p_gen.add_argument("--problem", required=True,
                       choices=("hankel", "prescribed", "spd"))
    p_gen.add_argument("--n", type=int, required=True)
    p_gen.add_argument("--seed", type=int, default=0)
    p_gen.add_argument("--cond", type=float, default=100.0,
                       help="condition target for the spd generator")
    p_gen.add_argument("--out", required=True, help="matrix output path (.mtx)")
    p_gen.set_defaults(func=_cmd_gen)
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (OSError, ValueError, np.linalg.LinAlgError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
