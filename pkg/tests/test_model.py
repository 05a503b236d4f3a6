import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sparsenmf import ConstraintSpec, FactorModel, FitReport, SolverConfig, objective


class TestFactorModel:
    def test_identity_basis_reconstructs_coefficients(self):
        model = FactorModel(np.eye(2), [[1.0, 2.0], [3.0, 4.0]])
        assert np.array_equal(model.reconstruct(), [[1.0, 2.0], [3.0, 4.0]])

    def test_zero_coefficients_reconstruct_zero(self):
        model = FactorModel([[1.0], [1.0]], [[0.0, 0.0, 0.0]])
        assert np.array_equal(model.reconstruct(), np.zeros((2, 3)))

    def test_hand_multiplied_product(self):
        model = FactorModel([[2.0], [1.0]], [[3.0, 1.0]])
        assert np.array_equal(model.reconstruct(), [[6.0, 2.0], [3.0, 1.0]])

    def test_reconstruction_is_non_negative(self):
        rng = np.random.default_rng(0)
        model = FactorModel(rng.random((5, 3)), rng.random((3, 7)))
        assert (model.reconstruct() >= 0).all()

    def test_negative_entries_rejected(self):
        with pytest.raises(ValueError, match="non-negative"):
            FactorModel([[1.0], [-0.1]], [[1.0]])
        with pytest.raises(ValueError, match="non-negative"):
            FactorModel([[1.0], [0.1]], [[-1.0]])

    def test_component_mismatch_rejected(self):
        with pytest.raises(ValueError, match="components"):
            FactorModel(np.ones((3, 2)), np.ones((3, 4)))

    def test_components_property(self):
        assert FactorModel(np.ones((4, 3)), np.ones((3, 2))).components == 3


class TestObjective:
    def test_exact_reconstruction_is_zero(self):
        rng = np.random.default_rng(1)
        model = FactorModel(rng.random((4, 2)), rng.random((2, 6)))
        assert objective(model.reconstruct(), model) == 0.0

    def test_distance_to_zero_model(self):
        assert objective([[1.0]], FactorModel([[0.0]], [[0.0]])) == 1.0

    def test_elementwise_sum_of_squares(self):
        # residuals are (+-0.5) at every entry: 4 * 0.25
        value = objective(
            [[1.0, 0.0], [0.0, 1.0]],
            FactorModel([[1.0], [1.0]], [[0.5, 0.5]]),
        )
        assert value == pytest.approx(1.0, abs=1e-15)

    def test_dimension_mismatch_rejected(self):
        model = FactorModel(np.ones((3, 2)), np.ones((2, 5)))
        with pytest.raises(ValueError, match="shape"):
            objective(np.ones((4, 5)), model)

    @given(st.floats(0.01, 100.0))
    @settings(max_examples=100, deadline=None)
    def test_rescaling_invariance(self, scale):
        # moving scale between a basis column and the matching coefficient row
        # leaves the product, hence the objective, unchanged
        rng = np.random.default_rng(2)
        basis = rng.random((6, 3))
        coeffs = rng.random((3, 8))
        data = rng.random((6, 8))
        base = objective(data, FactorModel(basis, coeffs))
        rescaled_basis = basis.copy()
        rescaled_coeffs = coeffs.copy()
        rescaled_basis[:, 1] *= scale
        rescaled_coeffs[1] /= scale
        moved = objective(data, FactorModel(rescaled_basis, rescaled_coeffs))
        assert moved == pytest.approx(base, rel=1e-9)


class TestConstraintSpec:
    def test_valid_targets(self):
        spec = ConstraintSpec(components=3, basis_sparseness=0.5, coeff_sparseness=1.0)
        assert spec.basis_sparseness == 0.5
        assert spec.coeff_sparseness == 1.0

    def test_out_of_range_rejected(self):
        with pytest.raises(ValueError):
            ConstraintSpec(components=2, basis_sparseness=1.2)
        with pytest.raises(ValueError):
            ConstraintSpec(components=2, coeff_sparseness=-0.2)

    def test_components_must_be_positive(self):
        with pytest.raises(ValueError):
            ConstraintSpec(components=0)


class TestSolverConfig:
    def test_defaults_are_valid(self):
        config = SolverConfig()
        assert config.stepsize_decrease < 1.0 < config.stepsize_increase

    def test_bad_stepsize_factors_rejected(self):
        with pytest.raises(ValueError):
            SolverConfig(stepsize_decrease=1.5)
        with pytest.raises(ValueError):
            SolverConfig(stepsize_increase=0.9)

    def test_nonpositive_values_rejected(self):
        with pytest.raises(ValueError):
            SolverConfig(min_stepsize=0.0)
        with pytest.raises(ValueError):
            SolverConfig(max_iterations=0)


class TestFitReport:
    def _report(self, trace):
        return FitReport(
            objective_trace=np.asarray(trace, dtype=float),
            iterations_run=len(trace) - 1,
            final_basis_sparseness=np.array([0.5]),
            final_coeff_sparseness=np.array([0.5]),
            stepsize_trace=np.ones((len(trace) - 1, 2)),
            converged=True,
        )

    def test_non_increasing_trace_accepted(self):
        report = self._report([4.0, 2.0, 2.0, 1.0])
        assert report.iterations_run == 3

    def test_increasing_trace_rejected(self):
        with pytest.raises(ValueError, match="increases"):
            self._report([4.0, 2.0, 3.0])

    def test_fp_noise_at_zero_plateau_tolerated(self):
        self._report([4.0, 1e-31, 2e-31])
