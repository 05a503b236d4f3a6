"""Alternating solver: projected gradient steps for sparseness-constrained
factors, multiplicative updates for unconstrained ones.

Each outer iteration updates the basis then the coefficients. A constrained
factor takes a gradient step followed by an exact sparseness projection, with
the stepsize backtracked until the objective actually drops; an unconstrained
factor takes the classical multiplicative update, which never increases the
objective on its own.
"""

import math
from dataclasses import dataclass, replace

import numpy as np

from .model import ConstraintSpec, FactorModel, FitReport, SolverConfig
from .projection import (
    FeasibilityError,
    ProjectionTarget,
    l1_for_sparseness,
    project_nonneg,
    sparseness,
)
from .validation import as_float_matrix, check_data_matrix, check_non_negative

# Floor applied to multiplicative-update denominators to avoid division by zero.
_DENOM_FLOOR = 1e-9

# Number of consecutive iterations with relative objective decrease below the
# tolerance required to declare convergence.
_FLAT_WINDOW = 10


@dataclass(frozen=True)
class SolverState:
    """Snapshot of the solver between steps.

    ``last_objective`` always equals the squared error of ``model`` against
    the data it is being fit to. ``stalled_basis``/``stalled_coeffs`` flag a
    constrained factor whose backtracking hit the minimum stepsize on its
    latest step (the factor was left unchanged).
    """

    model: FactorModel
    stepsize_basis: float
    stepsize_coeffs: float
    iteration: int
    last_objective: float
    stalled_basis: bool = False
    stalled_coeffs: bool = False


def _sq_err(data, basis, coeffs) -> float:
    residual = data - basis @ coeffs
    return float((residual * residual).sum())


def objective_gradients(data, basis, coeffs):
    """Gradients of the squared error with respect to basis and coefficients."""
    residual = basis @ coeffs - data
    return 2.0 * (residual @ coeffs.T), 2.0 * (basis.T @ residual)


def _project_basis_columns(basis, target_sparseness):
    """Project every column to its own L2 norm and the L1 norm for the target."""
    n = basis.shape[0]
    out = np.empty_like(basis)
    for j in range(basis.shape[1]):
        column = basis[:, j]
        norm = math.sqrt(float(column @ column))
        if norm <= 0.0:
            raise FeasibilityError(
                f"basis column {j} is zero; sparseness cannot be imposed while "
                "keeping its L2 norm"
            )
        target = ProjectionTarget(
            l1_for_sparseness(target_sparseness, norm, n), norm, n
        )
        out[:, j], _ = project_nonneg(column, target)
    return out


def _project_coeff_rows(coeffs, target_sparseness):
    """Project every row to unit L2 norm and the L1 norm for the target."""
    t = coeffs.shape[1]
    target = ProjectionTarget.from_sparseness(target_sparseness, 1.0, t)
    out = np.empty_like(coeffs)
    for i in range(coeffs.shape[0]):
        out[i], _ = project_nonneg(coeffs[i], target)
    return out


def initialize(data, constraints: ConstraintSpec, config: SolverConfig | None = None):
    """Seeded random positive factors, projected onto any active constraints.

    The basis is drawn before the coefficients from a single generator seeded
    with ``config.rng_seed``, uniformly on (0, 1]. Active basis constraints
    project each column to its sparseness target with its L2 norm kept;
    active coefficient constraints project each row to unit L2 norm.
    """
    data = check_data_matrix(data)
    config = config if config is not None else SolverConfig()
    n, t = data.shape
    m = constraints.components
    if constraints.basis_sparseness is not None and n < 2:
        raise FeasibilityError(
            "a basis sparseness target needs at least 2 variables (rows)"
        )
    if constraints.coeff_sparseness is not None and t < 2:
        raise FeasibilityError(
            "a coefficient sparseness target needs at least 2 measurements (columns)"
        )
    rng = np.random.default_rng(config.rng_seed)
    basis = 1.0 - rng.random((n, m))  # uniform on (0, 1]: strictly positive
    coeffs = 1.0 - rng.random((m, t))
    if constraints.basis_sparseness is not None:
        basis = _project_basis_columns(basis, constraints.basis_sparseness)
    if constraints.coeff_sparseness is not None:
        coeffs = _project_coeff_rows(coeffs, constraints.coeff_sparseness)
    model = FactorModel(basis, coeffs)
    return SolverState(
        model=model,
        stepsize_basis=config.initial_stepsize,
        stepsize_coeffs=config.initial_stepsize,
        iteration=0,
        last_objective=_sq_err(data, model.basis, model.coefficients),
    )


def step_basis(state: SolverState, data, constraints: ConstraintSpec,
               config: SolverConfig) -> SolverState:
    """One basis update; the objective never increases across it.

    Constrained: gradient step, per-column projection, stepsize halved and the
    step retried until the objective strictly drops. Hitting the minimum
    stepsize leaves the basis unchanged and sets ``stalled_basis``. On success
    the stepsize is multiplied by ``config.stepsize_increase``.
    Unconstrained: multiplicative update, stepsize untouched.
    """
    basis = state.model.basis
    coeffs = state.model.coefficients
    if constraints.basis_sparseness is None:
        numer = data @ coeffs.T
        denom = np.maximum((basis @ coeffs) @ coeffs.T, _DENOM_FLOOR)
        new_basis = basis * (numer / denom)  # ratio grouping keeps fixed points exact
        return replace(
            state,
            model=FactorModel(new_basis, coeffs),
            last_objective=_sq_err(data, new_basis, coeffs),
            stalled_basis=False,
        )

    grad, _ = objective_gradients(data, basis, coeffs)
    direction = 0.5 * grad  # constant factors on the direction are absorbed by the stepsize
    mu = state.stepsize_basis
    while True:
        candidate = _project_basis_columns(
            basis - mu * direction, constraints.basis_sparseness
        )
        err = _sq_err(data, candidate, coeffs)
        if err < state.last_objective:
            return replace(
                state,
                model=FactorModel(candidate, coeffs),
                last_objective=err,
                stepsize_basis=mu * config.stepsize_increase,
                stalled_basis=False,
            )
        mu *= config.stepsize_decrease
        if mu < config.min_stepsize:
            return replace(
                state, stepsize_basis=config.min_stepsize, stalled_basis=True
            )


def step_coeffs(state: SolverState, data, constraints: ConstraintSpec,
                config: SolverConfig) -> SolverState:
    """One coefficient update, mirroring ``step_basis`` on the rows.

    Constrained rows are projected to unit L2 norm with the L1 norm set for
    the sparseness target.
    """
    basis = state.model.basis
    coeffs = state.model.coefficients
    if constraints.coeff_sparseness is None:
        numer = basis.T @ data
        denom = np.maximum(basis.T @ (basis @ coeffs), _DENOM_FLOOR)
        new_coeffs = coeffs * (numer / denom)
        return replace(
            state,
            model=FactorModel(basis, new_coeffs),
            last_objective=_sq_err(data, basis, new_coeffs),
            stalled_coeffs=False,
        )

    _, grad = objective_gradients(data, basis, coeffs)
    direction = 0.5 * grad
    mu = state.stepsize_coeffs
    while True:
        candidate = _project_coeff_rows(
            coeffs - mu * direction, constraints.coeff_sparseness
        )
        err = _sq_err(data, basis, candidate)
        if err < state.last_objective:
            return replace(
                state,
                model=FactorModel(basis, candidate),
                last_objective=err,
                stepsize_coeffs=mu * config.stepsize_increase,
                stalled_coeffs=False,
            )
        mu *= config.stepsize_decrease
        if mu < config.min_stepsize:
            return replace(
                state, stepsize_coeffs=config.min_stepsize, stalled_coeffs=True
            )


def _nan_safe_sparseness(vector) -> float:
    if vector.size < 2 or not np.any(vector):
        return float("nan")
    return sparseness(vector)


def factorize(data, constraints: ConstraintSpec,
              config: SolverConfig | None = None, callback=None):
    """Fit a sparseness-constrained non-negative factorization of ``data``.

    Alternates ``step_basis`` and ``step_coeffs`` until the relative objective
    decrease stays below ``config.objective_rel_tolerance`` for 10 consecutive
    iterations, both constrained factors stall at the minimum stepsize, or
    ``config.max_iterations`` is reached. The returned report's objective
    trace starts at the initial model's objective and is non-increasing.

    Parameters
    ----------
    data : (n_variables, n_measurements) array-like, elementwise >= 0
    constraints : ConstraintSpec
    config : SolverConfig, optional
    callback : callable, optional
        Called as ``callback(state)`` with the ``SolverState`` after every
        outer iteration; handy for auditing constraint maintenance.

    Returns
    -------
    (FactorModel, FitReport)
    """
    data = check_data_matrix(data)
    config = config if config is not None else SolverConfig()
    state = initialize(data, constraints, config)
    objective_trace = [state.last_objective]
    stepsize_trace = []
    # Below the fp noise floor of the initial objective, relative decreases
    # are meaningless; treat such iterations as flat.
    noise_floor = np.finfo(np.float64).eps * state.last_objective
    flat_streak = 0
    converged = False

    for i in range(config.max_iterations):
        previous = state.last_objective
        state = step_basis(state, data, constraints, config)
        state = step_coeffs(state, data, constraints, config)
        state = replace(state, iteration=i + 1)
        objective_trace.append(state.last_objective)
        stepsize_trace.append((state.stepsize_basis, state.stepsize_coeffs))
        if callback is not None:
            callback(state)
        drop = previous - state.last_objective
        relative = drop / previous if previous > noise_floor else 0.0
        flat_streak = flat_streak + 1 if relative < config.objective_rel_tolerance else 0
        if flat_streak >= _FLAT_WINDOW:
            converged = True
            break
        if state.stalled_basis and state.stalled_coeffs:
            converged = True
            break

    model = state.model
    report = FitReport(
        objective_trace=np.asarray(objective_trace),
        iterations_run=state.iteration,
        final_basis_sparseness=np.asarray(
            [_nan_safe_sparseness(model.basis[:, j]) for j in range(model.components)]
        ),
        final_coeff_sparseness=np.asarray(
            [_nan_safe_sparseness(model.coefficients[i]) for i in range(model.components)]
        ),
        stepsize_trace=np.asarray(stepsize_trace, dtype=np.float64).reshape(-1, 2),
        converged=converged,
    )
    return model, report


def solve_coefficients(data, basis, coeff_sparseness=None,
                       config: SolverConfig | None = None):
    """Fit coefficients for a fixed basis (the coefficient half of ``factorize``).

    Runs coefficient updates only, with the same stopping rule as the full
    solver, and returns the (n_components, n_measurements) coefficient matrix.
    """
    data = check_data_matrix(data)
    basis = check_non_negative(as_float_matrix(basis, "basis"), "basis")
    if basis.shape[0] != data.shape[0]:
        raise ValueError(
            f"basis has {basis.shape[0]} rows but data has {data.shape[0]}"
        )
    config = config if config is not None else SolverConfig()
    m = basis.shape[1]
    constraints = ConstraintSpec(components=m, coeff_sparseness=coeff_sparseness)
    if coeff_sparseness is not None and data.shape[1] < 2:
        raise FeasibilityError(
            "a coefficient sparseness target needs at least 2 measurements (columns)"
        )
    rng = np.random.default_rng(config.rng_seed)
    coeffs = 1.0 - rng.random((m, data.shape[1]))
    if coeff_sparseness is not None:
        coeffs = _project_coeff_rows(coeffs, coeff_sparseness)
    model = FactorModel(basis, coeffs)
    state = SolverState(
        model=model,
        stepsize_basis=config.initial_stepsize,
        stepsize_coeffs=config.initial_stepsize,
        iteration=0,
        last_objective=_sq_err(data, basis, coeffs),
    )
    noise_floor = np.finfo(np.float64).eps * state.last_objective
    flat_streak = 0
    for i in range(config.max_iterations):
        previous = state.last_objective
        state = step_coeffs(state, data, constraints, config)
        state = replace(state, iteration=i + 1)
        drop = previous - state.last_objective
        relative = drop / previous if previous > noise_floor else 0.0
        flat_streak = flat_streak + 1 if relative < config.objective_rel_tolerance else 0
        if flat_streak >= _FLAT_WINDOW or state.stalled_coeffs:
            break
    return state.model.coefficients
