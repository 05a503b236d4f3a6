"""Scikit-learn compatible front end for the sparseness-constrained solver."""

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted

from .model import ConstraintSpec, SolverConfig
from .solver import factorize, solve_coefficients


class SparseNMF(TransformerMixin, BaseEstimator):
    """Non-negative matrix factorization with explicit sparseness control.

    Factorizes ``X ~ activations @ components_`` with every factor
    elementwise non-negative, where ``X`` is (n_samples, n_features),
    ``activations`` is (n_samples, n_components) and ``components_`` is
    (n_components, n_features). Optionally pins the sparseness (a normalized
    L1/L2 ratio: 0 for constant vectors, 1 for single spikes) of each
    dictionary atom and/or of each component's activation profile to an
    exact value via a joint-norm projection, instead of merely penalizing it.

    Parameters
    ----------
    n_components : int, default=2
        Number of dictionary atoms.
    basis_sparseness : float or None, default=None
        Target sparseness in [0, 1] for each row of ``components_``.
        None leaves the atoms unconstrained (multiplicative updates).
    coeff_sparseness : float or None, default=None
        Target sparseness in [0, 1] for each component's activations across
        samples (the columns of the transformed data). None leaves them
        unconstrained.
    max_iter : int, default=5000
        Outer iteration budget for ``fit``.
    tol : float, default=1e-9
        Relative objective-decrease tolerance; fitting stops once the
        decrease stays below it for 10 consecutive iterations.
    random_state : int or None, default=None
        Seed for the random initialization. None draws a fresh seed.

    Attributes
    ----------
    components_ : ndarray of shape (n_components, n_features)
    n_components_ : int
    n_iter_ : int
    reconstruction_err_ : float
        Frobenius norm of ``X - activations @ components_`` after fitting.
    fit_report_ : FitReport
        Objective and stepsize traces plus achieved sparseness per component.

    Examples
    --------
    >>> import numpy as np
    >>> from sparsenmf import SparseNMF
    >>> X = np.abs(np.random.default_rng(0).normal(size=(40, 12)))
    >>> est = SparseNMF(n_components=3, coeff_sparseness=0.7, random_state=0)
    >>> activations = est.fit_transform(X)
    >>> activations.shape
    (40, 3)
    """

    def __init__(self, n_components=2, *, basis_sparseness=None,
                 coeff_sparseness=None, max_iter=5000, tol=1e-9,
                 random_state=None):
        self.n_components = n_components
        self.basis_sparseness = basis_sparseness
        self.coeff_sparseness = coeff_sparseness
        self.max_iter = max_iter
        self.tol = tol
        self.random_state = random_state

    def _config(self):
        seed = self.random_state
        if seed is None:
            seed = int(np.random.SeedSequence().entropy % (2**32))
        return SolverConfig(
            max_iterations=int(self.max_iter),
            objective_rel_tolerance=float(self.tol),
            rng_seed=int(seed),
        )

    def _validated(self, X):
        X = check_array(X, dtype=np.float64)
        if np.any(X < 0):
            raise ValueError("SparseNMF requires non-negative input data")
        return X

    def fit_transform(self, X, y=None):
        """Fit the factorization and return the per-sample activations."""
        X = self._validated(X)
        constraints = ConstraintSpec(
            components=int(self.n_components),
            basis_sparseness=self.basis_sparseness,
            coeff_sparseness=self.coeff_sparseness,
        )
        # The solver works on a (variables x measurements) matrix, i.e. X
        # transposed: its basis columns are our dictionary atoms.
        model, report = factorize(X.T, constraints, self._config())
        self.components_ = model.basis.T
        self.n_components_ = model.components
        self.n_features_in_ = X.shape[1]
        self.fit_report_ = report
        self.n_iter_ = report.iterations_run
        self.reconstruction_err_ = float(np.sqrt(report.objective_trace[-1]))
        return model.coefficients.T

    def fit(self, X, y=None):
        """Fit the factorization to ``X`` and return the estimator."""
        self.fit_transform(X)
        return self

    def transform(self, X):
        """Solve for activations of ``X`` against the fitted dictionary."""
        check_is_fitted(self, "components_")
        X = self._validated(X)
        if X.shape[1] != self.n_features_in_:
            raise ValueError(
                f"X has {X.shape[1]} features, expected {self.n_features_in_}"
            )
        coeffs = solve_coefficients(
            X.T,
            self.components_.T,
            coeff_sparseness=self.coeff_sparseness,
            config=self._config(),
        )
        return coeffs.T

    def inverse_transform(self, X_transformed):
        """Reconstruct data from activations: ``X_transformed @ components_``."""
        check_is_fitted(self, "components_")
        return np.asarray(X_transformed, dtype=np.float64) @ self.components_
