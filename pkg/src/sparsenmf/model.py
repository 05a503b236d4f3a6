"""Core model types: factor pairs, constraint/config records and the objective."""

from dataclasses import dataclass

import numpy as np

from .validation import as_float_matrix, check_non_negative

# Relative slack allowed when validating that an objective trace never increases;
# multiplicative updates can wobble by a few ulp at a plateau.
TRACE_SLACK = 1e-12


@dataclass(frozen=True)
class FactorModel:
    """A non-negative factor pair approximating a data matrix as basis @ coefficients.

    Parameters
    ----------
    basis : (n_variables, n_components) array
        Basis vectors stored as columns.
    coefficients : (n_components, n_measurements) array
        Per-component activations stored as rows.
    """

    basis: np.ndarray
    coefficients: np.ndarray

    def __post_init__(self):
        basis = check_non_negative(as_float_matrix(self.basis, "basis"), "basis")
        coeffs = check_non_negative(
            as_float_matrix(self.coefficients, "coefficients"), "coefficients"
        )
        if basis.shape[1] != coeffs.shape[0]:
            raise ValueError(
                f"basis has {basis.shape[1]} components but coefficients has "
                f"{coeffs.shape[0]} rows"
            )
        object.__setattr__(self, "basis", basis)
        object.__setattr__(self, "coefficients", coeffs)

    @property
    def components(self) -> int:
        return self.basis.shape[1]

    def reconstruct(self) -> np.ndarray:
        """Return the reconstruction basis @ coefficients (elementwise >= 0)."""
        return self.basis @ self.coefficients


def objective(data, model: FactorModel) -> float:
    """Squared reconstruction error sum((data - basis @ coefficients)**2)."""
    data = as_float_matrix(data, "data matrix")
    expected = (model.basis.shape[0], model.coefficients.shape[1])
    if data.shape != expected:
        raise ValueError(
            f"data matrix shape {data.shape} does not match model shape {expected}"
        )
    residual = data - model.reconstruct()
    return float((residual * residual).sum())


@dataclass(frozen=True)
class ConstraintSpec:
    """Optional sparseness targets for the basis columns and coefficient rows."""

    components: int
    basis_sparseness: float | None = None
    coeff_sparseness: float | None = None

    def __post_init__(self):
        if int(self.components) != self.components or self.components < 1:
            raise ValueError("components must be a positive integer")
        object.__setattr__(self, "components", int(self.components))
        for name in ("basis_sparseness", "coeff_sparseness"):
            value = getattr(self, name)
            if value is None:
                continue
            value = float(value)
            if not 0.0 <= value <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1], got {value}")
            object.__setattr__(self, name, value)


@dataclass(frozen=True)
class SolverConfig:
    """Solver knobs: iteration budget, stopping rule, stepsize adaptation, seed."""

    max_iterations: int = 5000
    objective_rel_tolerance: float = 1e-9
    initial_stepsize: float = 1.0
    stepsize_decrease: float = 0.5
    stepsize_increase: float = 1.2
    min_stepsize: float = 1e-20
    rng_seed: int = 0

    def __post_init__(self):
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")
        for name in (
            "objective_rel_tolerance",
            "initial_stepsize",
            "stepsize_decrease",
            "stepsize_increase",
            "min_stepsize",
        ):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        if not self.stepsize_decrease < 1.0 < self.stepsize_increase:
            raise ValueError("need stepsize_decrease < 1 < stepsize_increase")


@dataclass(frozen=True)
class FitReport:
    """Outcome of a solver run: objective/stepsize traces and final sparseness.

    ``objective_trace[0]`` is the objective of the initial model; each later
    entry is the objective after one full outer iteration. ``stepsize_trace``
    holds one (basis stepsize, coefficient stepsize) pair per iteration.
    Final sparseness entries are NaN for factors whose sparseness is
    undefined (zero vector or dimension 1).
    """

    objective_trace: np.ndarray
    iterations_run: int
    final_basis_sparseness: np.ndarray
    final_coeff_sparseness: np.ndarray
    stepsize_trace: np.ndarray
    converged: bool

    def __post_init__(self):
        trace = np.asarray(self.objective_trace, dtype=np.float64)
        diffs = np.diff(trace)
        # Ignore wobble below the fp noise floor of one objective evaluation;
        # a fully converged objective near zero jitters by ~eps * initial value.
        noise_floor = np.finfo(np.float64).eps * abs(float(trace[0]))
        increases = np.flatnonzero(
            (diffs > TRACE_SLACK * np.abs(trace[:-1])) & (diffs > noise_floor)
        )
        if increases.size:
            i = int(increases[0])
            raise ValueError(
                f"objective trace increases at iteration {i + 1}: "
                f"{trace[i]!r} -> {trace[i + 1]!r}"
            )
        object.__setattr__(self, "objective_trace", trace)
        object.__setattr__(
            self, "stepsize_trace", np.asarray(self.stepsize_trace, dtype=np.float64)
        )
