"""Command-line interface.

Subcommands: ``fit`` (run the solver on a matrix file), ``project`` (apply
the joint-norm projection to a vector file), ``sparseness`` (print the
sparseness of each row of a file), ``export-basis`` (render a basis matrix
as a PGM patch grid) and ``bench-projection`` (projection convergence
benchmark to CSV).

Exit status: 0 success, 1 usage error, 2 data or feasibility error,
3 I/O error.
"""

import argparse
import sys

import numpy as np

from .benchmark import (
    DEFAULT_DIMS,
    DEFAULT_SPARSENESS_LEVELS,
    DEFAULT_TRIALS,
    run_grid,
    write_results_csv,
)
from .matrix_io import (
    ImageGridSpec,
    export_basis_grid,
    read_array,
    read_matrix,
    write_matrix,
)
from .model import ConstraintSpec, SolverConfig
from .projection import (
    ProjectionTarget,
    l1_for_sparseness,
    project_signed,
    sparseness,
)
from .solver import factorize

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_IO = 3

_BENCH_SEED = 0  # fixed so repeated runs are byte-identical


class _Parser(argparse.ArgumentParser):
    """ArgumentParser that exits with status 1 on usage errors."""

    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(EXIT_USAGE)


def _int_list(text):
    return tuple(int(tok) for tok in text.split(",") if tok.strip())


def _float_list(text):
    return tuple(float(tok) for tok in text.split(",") if tok.strip())


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="sparsenmf", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    fit = sub.add_parser("fit", help="factorize a data matrix file")
    fit.add_argument("--data", required=True, help="input matrix file")
    fit.add_argument("--components", required=True, type=int, metavar="M")
    fit.add_argument("--sw", type=float, default=None,
                     help="basis sparseness target in [0, 1]")
    fit.add_argument("--sh", type=float, default=None,
                     help="coefficient sparseness target in [0, 1]")
    fit.add_argument("--max-iter", type=int, default=SolverConfig.max_iterations)
    fit.add_argument("--tol", type=float, default=SolverConfig.objective_rel_tolerance)
    fit.add_argument("--seed", type=int, default=0)
    fit.add_argument("--out-w", required=True, help="output file for the basis matrix")
    fit.add_argument("--out-h", required=True,
                     help="output file for the coefficient matrix")
    fit.add_argument("--report", default=None,
                     help="optional CSV report (objective trace, stepsizes, "
                          "final sparseness per component)")
    fit.set_defaults(func=_cmd_fit)

    project = sub.add_parser("project", help="project a vector file onto "
                                             "prescribed sparseness and L2 norm")
    project.add_argument("--in", dest="infile", required=True, help="vector file")
    project.add_argument("--sparseness", required=True, type=float)
    project.add_argument("--l2", type=float, default=1.0)
    project.set_defaults(func=_cmd_project)

    sparse = sub.add_parser("sparseness",
                            help="print the sparseness of each row of a file")
    sparse.add_argument("--in", dest="infile", required=True)
    sparse.set_defaults(func=_cmd_sparseness)

    export = sub.add_parser("export-basis",
                            help="render a basis matrix as a PGM patch grid")
    export.add_argument("--w", required=True, help="basis matrix file")
    export.add_argument("--patch-h", required=True, type=int)
    export.add_argument("--patch-w", required=True, type=int)
    export.add_argument("--cols", required=True, type=int)
    export.add_argument("--out", required=True, help="output .pgm path")
    export.set_defaults(func=_cmd_export_basis)

    bench = sub.add_parser("bench-projection",
                           help="projection convergence benchmark to CSV")
    bench.add_argument("--dims", type=_int_list, default=DEFAULT_DIMS,
                       metavar="N1,N2,...")
    bench.add_argument("--sparseness-grid", type=_float_list,
                       default=DEFAULT_SPARSENESS_LEVELS, metavar="S1,S2,...")
    bench.add_argument("--trials", type=int, default=DEFAULT_TRIALS)
    bench.add_argument("--out", required=True, help="output CSV path")
    bench.set_defaults(func=_cmd_bench)

    return parser


def _cmd_fit(args) -> int:
    data = read_matrix(args.data)
    constraints = ConstraintSpec(
        components=args.components,
        basis_sparseness=args.sw,
        coeff_sparseness=args.sh,
    )
    config = SolverConfig(
        max_iterations=args.max_iter,
        objective_rel_tolerance=args.tol,
        rng_seed=args.seed,
    )
    model, report = factorize(data, constraints, config)
    write_matrix(model.basis, args.out_w)
    write_matrix(model.coefficients, args.out_h)
    if args.report is not None:
        _write_report(report, args.report)
    return EXIT_OK


def _write_report(report, path) -> None:
    """Flat CSV (record,index,value): one row per trace entry or summary item."""
    lines = ["record,index,value"]
    for i, value in enumerate(report.objective_trace):
        lines.append("objective,%d,%.17g" % (i, value))
    for i, (mu_basis, mu_coeffs) in enumerate(report.stepsize_trace):
        lines.append("stepsize_w,%d,%.17g" % (i, mu_basis))
        lines.append("stepsize_h,%d,%.17g" % (i, mu_coeffs))
    for j, value in enumerate(report.final_basis_sparseness):
        lines.append("basis_sparseness,%d,%.17g" % (j, value))
    for j, value in enumerate(report.final_coeff_sparseness):
        lines.append("coeff_sparseness,%d,%.17g" % (j, value))
    lines.append("iterations,0,%d" % report.iterations_run)
    lines.append("converged,0,%d" % int(report.converged))
    with open(path, "w", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def _read_vector(path):
    array = read_array(path)
    if array.shape[0] == 1:
        return array[0]
    if array.shape[1] == 1:
        return array[:, 0]
    raise ValueError(
        f"{path}: expected a vector (one row or one column), got shape "
        f"{array.shape}"
    )


def _cmd_project(args) -> int:
    vector = _read_vector(args.infile)
    target = ProjectionTarget(
        l1_for_sparseness(args.sparseness, args.l2, vector.size),
        args.l2,
        vector.size,
    )
    projected, trace = project_signed(vector, target)
    print(" ".join(str(value) for value in projected))
    print(f"iterations: {trace.iterations}")
    return EXIT_OK


def _cmd_sparseness(args) -> int:
    array = read_array(args.infile)
    for row in array:
        print(sparseness(row))
    return EXIT_OK


def _cmd_export_basis(args) -> int:
    basis = read_matrix(args.w)
    spec = ImageGridSpec(
        patch_height=args.patch_h,
        patch_width=args.patch_w,
        grid_cols=args.cols,
    )
    export_basis_grid(basis, spec, args.out)
    return EXIT_OK


def _cmd_bench(args) -> int:
    results, skipped = run_grid(
        dims=args.dims,
        sparseness_levels=args.sparseness_grid,
        trials=args.trials,
        seed=_BENCH_SEED,
    )
    for note in skipped:
        print(f"skipped infeasible cell: {note}", file=sys.stderr)
    write_results_csv(results, args.out)
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (ValueError, ArithmeticError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
