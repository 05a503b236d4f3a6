"""Non-negative matrix factorization with exact, user-set sparseness control.

The package provides the joint L1/L2 projection operator that pins a
vector's sparseness exactly, an alternating solver built on it, a
scikit-learn style estimator, matrix/PGM I/O, a projection convergence
benchmark and a command-line front end (``sparsenmf``).
"""

from .benchmark import (
    BenchResult,
    DEFAULT_DIMS,
    DEFAULT_SPARSENESS_LEVELS,
    DEFAULT_TRIALS,
    generate_with_sparseness,
    run_grid,
    write_results_csv,
)
from .estimator import SparseNMF
from .matrix_io import (
    ImageGridSpec,
    MatrixParseError,
    export_basis_grid,
    read_array,
    read_matrix,
    write_matrix,
)
from .model import (
    ConstraintSpec,
    FactorModel,
    FitReport,
    SolverConfig,
    objective,
)
from .projection import (
    FeasibilityError,
    NumericalError,
    ProjectionTarget,
    ProjectionTrace,
    l1_for_sparseness,
    project_nonneg,
    project_signed,
    sparseness,
)
from .solver import (
    SolverState,
    factorize,
    initialize,
    objective_gradients,
    solve_coefficients,
    step_basis,
    step_coeffs,
)

__version__ = "0.1.0"

__all__ = [
    "BenchResult",
    "ConstraintSpec",
    "DEFAULT_DIMS",
    "DEFAULT_SPARSENESS_LEVELS",
    "DEFAULT_TRIALS",
    "FactorModel",
    "FeasibilityError",
    "FitReport",
    "ImageGridSpec",
    "MatrixParseError",
    "NumericalError",
    "ProjectionTarget",
    "ProjectionTrace",
    "SolverConfig",
    "SolverState",
    "SparseNMF",
    "export_basis_grid",
    "factorize",
    "generate_with_sparseness",
    "initialize",
    "l1_for_sparseness",
    "objective",
    "objective_gradients",
    "project_nonneg",
    "project_signed",
    "read_array",
    "read_matrix",
    "run_grid",
    "solve_coefficients",
    "sparseness",
    "step_basis",
    "step_coeffs",
    "write_matrix",
    "write_results_csv",
]
