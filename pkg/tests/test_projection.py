import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sparsenmf import (
    FeasibilityError,
    ProjectionTarget,
    l1_for_sparseness,
    project_nonneg,
    project_signed,
    sparseness,
)


def random_target(rng, n):
    """Uniformly random feasible target: l2 in [0.5, 2], l1/l2 across the band."""
    l2 = rng.uniform(0.5, 2.0)
    ratio = rng.uniform(1.0, math.sqrt(n))
    return ProjectionTarget(ratio * l2, l2, n)


def assert_norms(vector, target, rel=1e-9):
    assert (vector >= 0).all()
    assert abs(vector.sum() - target.l1) <= rel * target.l1
    assert abs(np.linalg.norm(vector) - target.l2) <= rel * target.l2


class TestSparseness:
    def test_single_spike_is_one(self):
        assert sparseness([0.0, 0.0, 5.0, 0.0]) == 1.0

    def test_constant_vector_is_zero(self):
        assert abs(sparseness([0.7, 0.7, 0.7, 0.7])) <= 1e-12

    def test_known_value(self):
        # (sqrt(2) - 1.5/sqrt(1.25)) / (sqrt(2) - 1), evaluated independently
        assert sparseness([1.0, 0.5]) == pytest.approx(
            0.17520617977219377, rel=1e-12
        )

    def test_zero_vector_rejected(self):
        with pytest.raises(ValueError, match="zero vector"):
            sparseness([0.0, 0.0, 0.0])

    def test_dimension_one_rejected(self):
        with pytest.raises(ValueError, match="dimension"):
            sparseness([3.0])

    def test_sign_invariance(self):
        x = np.array([1.0, -2.0, 3.0, -4.0])
        assert sparseness(x) == pytest.approx(sparseness(np.abs(x)), abs=1e-15)

    @given(
        st.lists(st.floats(0.01, 100.0), min_size=2, max_size=20),
        st.floats(0.001, 1000.0),
    )
    @settings(max_examples=200, deadline=None)
    def test_scale_invariance(self, values, scale):
        x = np.asarray(values)
        assert sparseness(scale * x) == pytest.approx(sparseness(x), abs=1e-10)


class TestL1ForSparseness:
    def test_zero_sparseness_gives_root_n(self):
        assert l1_for_sparseness(0.0, 1.0, 4) == 2.0

    def test_full_sparseness_gives_l2(self):
        assert l1_for_sparseness(1.0, 3.0, 9) == 3.0

    def test_midpoint(self):
        assert l1_for_sparseness(0.5, 1.0, 4) == 1.5

    def test_out_of_range_target_rejected(self):
        with pytest.raises(FeasibilityError):
            l1_for_sparseness(1.5, 1.0, 4)
        with pytest.raises(FeasibilityError):
            l1_for_sparseness(-0.1, 1.0, 4)

    def test_round_trip_through_projection(self):
        rng = np.random.default_rng(0)
        for s in (0.1, 0.3, 0.5, 0.7, 0.9):
            target = ProjectionTarget.from_sparseness(s, 1.0, 12)
            vector, _ = project_nonneg(rng.exponential(1.0, 12), target)
            assert sparseness(vector) == pytest.approx(s, abs=1e-9)


class TestProjectionTarget:
    def test_infeasible_low_l1(self):
        with pytest.raises(FeasibilityError):
            ProjectionTarget(0.5, 1.0, 4)

    def test_infeasible_high_l1(self):
        with pytest.raises(FeasibilityError):
            ProjectionTarget(2.1, 1.0, 4)

    def test_tiny_violations_clamp_to_boundary(self):
        t = ProjectionTarget(1.0 - 1e-15, 1.0, 4)
        assert t.l1 == 1.0
        t = ProjectionTarget(2.0 + 1e-15, 1.0, 4)
        assert t.l1 == 2.0

    def test_dimension_one_rejected(self):
        with pytest.raises(ValueError):
            ProjectionTarget(1.0, 1.0, 1)

    def test_nonpositive_norms_rejected(self):
        with pytest.raises(ValueError):
            ProjectionTarget(0.0, 1.0, 3)
        with pytest.raises(ValueError):
            ProjectionTarget(1.0, -1.0, 3)


class TestProjectNonneg:
    def test_identity_on_feasible_point(self):
        x = np.array([0.6, 0.4, 0.2])
        target = ProjectionTarget(1.2, math.sqrt(0.56), 3)
        s, trace = project_nonneg(x, target)
        assert s == pytest.approx(x, abs=1e-9)
        assert trace.iterations == 1

    def test_two_dim_corner(self):
        s, trace = project_nonneg([0.8, 0.2], ProjectionTarget(1.0, 1.0, 2))
        assert s == pytest.approx([1.0, 0.0], abs=1e-12)
        assert trace.iterations == 1

    def test_negative_component_forces_zero_set_iteration(self):
        # brute-force oracle: both (1,0,0) and (0,1,0) are optimal at distance
        # sqrt(5); ties break toward the lowest-index component
        s, trace = project_nonneg([1.0, 1.0, -2.0], ProjectionTarget(1.0, 1.0, 3))
        assert s == pytest.approx([1.0, 0.0, 0.0], abs=1e-12)
        assert trace.iterations >= 2
        assert np.linalg.norm(np.array([1.0, 1.0, -2.0]) - s) == pytest.approx(
            math.sqrt(5.0), rel=1e-12
        )

    def test_constraint_satisfaction_random(self):
        rng = np.random.default_rng(1)
        for _ in range(300):
            n = int(rng.integers(2, 40))
            target = random_target(rng, n)
            x = rng.normal(size=n)
            s, trace = project_nonneg(x, target)
            assert_norms(s, target)
            assert trace.iterations <= n

    def test_idempotence(self):
        rng = np.random.default_rng(2)
        for _ in range(100):
            n = int(rng.integers(2, 20))
            target = random_target(rng, n)
            s1, _ = project_nonneg(rng.normal(size=n), target)
            s2, _ = project_nonneg(s1, target)
            assert s2 == pytest.approx(s1, abs=1e-9)

    def test_permutation_equivariance(self):
        rng = np.random.default_rng(3)
        for _ in range(50):
            n = int(rng.integers(2, 15))
            target = random_target(rng, n)
            x = rng.normal(size=n)
            perm = rng.permutation(n)
            s_direct, _ = project_nonneg(x[perm], target)
            s_mapped, _ = project_nonneg(x, target)
            assert s_direct == pytest.approx(s_mapped[perm], abs=1e-9)

    def test_zero_input_allowed(self):
        target = ProjectionTarget(1.5, 1.0, 4)
        s, _ = project_nonneg(np.zeros(4), target)
        assert_norms(s, target)

    def test_boundary_l1_equals_root_n_l2_gives_constant_vector(self):
        target = ProjectionTarget(2.0, 1.0, 4)  # l1 = sqrt(4) * l2
        s, trace = project_nonneg([0.9, 0.3, 0.2, 0.1], target)
        assert s == pytest.approx(np.full(4, 0.5), abs=1e-12)
        assert trace.iterations == 1

    def test_zero_set_growth_is_strict(self):
        rng = np.random.default_rng(4)
        multi_pass = 0
        for _ in range(200):
            n = int(rng.integers(3, 30))
            # high target sparseness provokes several zeroing passes
            target = ProjectionTarget.from_sparseness(0.9, 1.0, n)
            s, trace = project_nonneg(rng.normal(size=n), target)
            sizes = np.asarray(trace.zero_set_sizes)
            assert sizes[0] == 0
            assert (np.diff(sizes) > 0).all()
            assert trace.iterations == len(sizes) <= n
            multi_pass += trace.iterations > 1
        assert multi_pass > 100  # the scenario actually exercised the loop

    def test_dimension_mismatch_rejected(self):
        with pytest.raises(ValueError, match="dimension"):
            project_nonneg([1.0, 2.0], ProjectionTarget(1.5, 1.0, 3))

    @given(st.integers(2, 8), st.integers(0, 2**32 - 1))
    @settings(max_examples=150, deadline=None)
    def test_optimality_never_beaten_by_feasible_samples(self, n, seed):
        # any feasible point (built by projecting a fresh random draw) must be
        # at least as far from x as the returned projection
        rng = np.random.default_rng(seed)
        target = random_target(rng, n)
        x = rng.normal(size=n)
        s, _ = project_nonneg(x, target)
        dist = np.linalg.norm(x - s)
        for _ in range(10):
            other, _ = project_nonneg(rng.normal(size=n), target)
            assert dist <= np.linalg.norm(x - other) + 1e-9


class TestProjectSigned:
    def test_matches_nonneg_for_nonneg_input(self):
        rng = np.random.default_rng(5)
        x = rng.random(6)
        target = random_target(rng, 6)
        expected, _ = project_nonneg(x, target)
        got, _ = project_signed(x, target)
        assert got == pytest.approx(expected, abs=1e-15)

    def test_sign_symmetry(self):
        s, trace = project_signed([-0.8, 0.2], ProjectionTarget(1.0, 1.0, 2))
        assert s == pytest.approx([-1.0, 0.0], abs=1e-12)
        assert trace.iterations == 1

    def test_sparseness_matches_magnitude_projection(self):
        rng = np.random.default_rng(6)
        for _ in range(50):
            n = int(rng.integers(2, 20))
            target = random_target(rng, n)
            x = rng.normal(size=n)
            signed, _ = project_signed(x, target)
            magnitudes, _ = project_nonneg(np.abs(x), target)
            assert sparseness(signed) == pytest.approx(
                sparseness(magnitudes), abs=1e-12
            )

    def test_signs_preserved(self):
        rng = np.random.default_rng(7)
        for _ in range(50):
            n = int(rng.integers(2, 12))
            target = random_target(rng, n)
            x = rng.normal(size=n)
            s, _ = project_signed(x, target)
            assert ((s >= 0) | (x < 0)).all()
            assert ((s <= 0) | (x >= 0)).all()
