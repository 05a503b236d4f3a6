"""Sparseness measure and the exact non-negative joint L1/L2 projection.

The sparseness of a vector is a normalized ratio of its L1 and L2 norms:
1 for a single-spike vector, 0 for a constant vector, smoothly in between
otherwise. ``project_nonneg`` maps any vector to the closest (Euclidean)
non-negative vector with prescribed L1 and L2 norms, which pins the
sparseness of the result exactly; ``project_signed`` extends this to
vectors of arbitrary sign.
"""

import math
from dataclasses import dataclass

import numpy as np

from .validation import as_float_vector

# Relative slack for feasibility checks: norm targets violating the
# l2 <= l1 <= sqrt(n)*l2 band by less than this are clamped to the boundary.
FEASIBILITY_SLACK = 1e-12

# When the iterate coincides with the hypersphere center the radial direction
# is undefined; squared distances below this (relative) threshold take a
# deterministic tie-break direction instead.
_DEGENERATE_SQ = 1e-24


class FeasibilityError(ValueError):
    """No non-negative vector of the given dimension has the requested norms."""


class NumericalError(ArithmeticError):
    """The projection's quadratic step lost too much precision to continue."""


@dataclass(frozen=True)
class ProjectionTarget:
    """Prescribed L1 norm, L2 norm and dimension for a non-negative vector.

    A non-negative vector of dimension ``n`` with L1 norm ``a`` and L2 norm
    ``b`` exists iff b <= a <= sqrt(n)*b. Violations within a relative slack
    of 1e-12 are clamped onto the boundary (the endpoints of the sparseness
    scale land exactly there); anything larger raises ``FeasibilityError``.
    """

    l1: float
    l2: float
    dimension: int

    def __post_init__(self):
        n = self.dimension
        if int(n) != n or n < 2:
            raise ValueError(f"dimension must be an integer >= 2, got {n}")
        object.__setattr__(self, "dimension", int(n))
        l1 = float(self.l1)
        l2 = float(self.l2)
        if not (math.isfinite(l1) and l1 > 0):
            raise ValueError(f"l1 must be a finite positive number, got {l1}")
        if not (math.isfinite(l2) and l2 > 0):
            raise ValueError(f"l2 must be a finite positive number, got {l2}")
        upper = math.sqrt(n) * l2
        if l1 < l2:
            if l1 < l2 * (1.0 - FEASIBILITY_SLACK):
                raise FeasibilityError(
                    f"l1={l1} is below the l2 norm {l2}; no vector has both"
                )
            l1 = l2
        elif l1 > upper:
            if l1 > upper * (1.0 + FEASIBILITY_SLACK):
                raise FeasibilityError(
                    f"l1={l1} exceeds sqrt(n)*l2={upper}; no non-negative "
                    f"vector of dimension {n} has both norms"
                )
            l1 = upper
        object.__setattr__(self, "l1", l1)
        object.__setattr__(self, "l2", l2)

    @classmethod
    def from_sparseness(cls, target_sparseness, l2, dimension):
        """Target whose L1 norm realizes ``target_sparseness`` at the given L2 norm."""
        return cls(l1_for_sparseness(target_sparseness, l2, dimension), l2, dimension)


@dataclass(frozen=True)
class ProjectionTrace:
    """Iteration record of one projection: pass count and zero-set growth.

    ``zero_set_sizes[k]`` is the number of components pinned at zero when
    pass ``k`` starts, so the first entry is always 0 and the sizes grow
    strictly across passes. The pass count never exceeds the dimension.
    """

    iterations: int
    zero_set_sizes: tuple


def sparseness(x) -> float:
    """Normalized L1/L2 sparseness of ``x``, in [0, 1].

    Evaluates to 1 exactly when a single component is non-zero and to 0
    exactly when all components are equal in magnitude. Invariant under
    permutation, sign flips and positive rescaling.

    Raises
    ------
    ValueError
        For the zero vector (undefined) and for dimension < 2 (the
        normalization denominator vanishes).
    """
    x = as_float_vector(x, "x")
    n = x.size
    if n < 2:
        raise ValueError("sparseness requires a vector of dimension >= 2")
    l2 = math.sqrt(float(x @ x))
    if l2 == 0.0:
        raise ValueError("sparseness of the zero vector is undefined")
    l1 = float(np.abs(x).sum())
    root_n = math.sqrt(n)
    return (root_n - l1 / l2) / (root_n - 1.0)


def l1_for_sparseness(target_sparseness, l2, dimension) -> float:
    """L1 norm a non-negative vector must carry to reach ``target_sparseness``.

    Inverts the sparseness measure at fixed L2 norm:
    l1 = l2 * (sqrt(n) - s*(sqrt(n) - 1)). The result always lies in the
    feasible band [l2, sqrt(n)*l2], hitting the ends at s = 1 and s = 0.
    """
    s = float(target_sparseness)
    if not 0.0 <= s <= 1.0:
        raise FeasibilityError(f"sparseness target must lie in [0, 1], got {s}")
    if int(dimension) != dimension or dimension < 2:
        raise ValueError(f"dimension must be an integer >= 2, got {dimension}")
    l2 = float(l2)
    if not (math.isfinite(l2) and l2 > 0):
        raise ValueError(f"l2 must be a finite positive number, got {l2}")
    root_n = math.sqrt(dimension)
    return l2 * (root_n - s * (root_n - 1.0))


def project_nonneg(x, target: ProjectionTarget):
    """Closest non-negative vector to ``x`` with the target L1 and L2 norms.

    Starts by shifting ``x`` onto the hyperplane where the components sum to
    the L1 target, then repeatedly moves radially outward from the center of
    that hyperplane until the L2 norm matches, pinning any components that
    come out negative at zero and re-balancing the sum. Each pass either
    finishes or pins at least one more component, so at most ``dimension``
    passes run.

    Parameters
    ----------
    x : array-like, shape (target.dimension,)
        Any real vector; it need not be non-negative.
    target : ProjectionTarget

    Returns
    -------
    s : ndarray, shape (target.dimension,)
        The projection; non-negative with both norms matching the target to
        1e-9 relative accuracy.
    trace : ProjectionTrace

    Notes
    -----
    When several feasible points are equally close (symmetric inputs, or the
    radial direction degenerating at the sphere center) the tie is broken
    deterministically toward the lowest-index free component.
    """
    x = as_float_vector(x, "x")
    n = target.dimension
    if x.size != n:
        raise ValueError(f"x has dimension {x.size}, target expects {n}")
    l1, l2 = target.l1, target.l2

    # On the boundary l1 = sqrt(n)*l2 the constant vector is the only
    # feasible point, so return it outright.
    if l1 >= math.sqrt(n) * l2 * (1.0 - FEASIBILITY_SLACK):
        return np.full(n, l1 / n), ProjectionTrace(1, (0,))

    s = x + (l1 - x.sum()) / n
    active = np.ones(n, dtype=bool)
    k = n
    zero_set_sizes = []
    l2_sq = l2 * l2

    for _ in range(n):
        zero_set_sizes.append(n - k)
        center_val = l1 / k
        center = np.where(active, center_val, 0.0)
        center_sq = l1 * l1 / k
        direction = s - center
        a = float(direction @ direction)
        if a <= _DEGENERATE_SQ * max(center_sq, l2_sq):
            if k == 1:
                # A single free component is fully determined by the sum
                # constraint; it satisfies the L2 constraint only if l1 = l2.
                if abs(l1 - l2) > 1e-9 * l2:
                    raise NumericalError(
                        "projection collapsed to one free component whose "
                        "norms cannot both be met"
                    )
                return center, ProjectionTrace(
                    len(zero_set_sizes), tuple(zero_set_sizes)
                )
            free = np.flatnonzero(active)
            direction = np.zeros(n)
            direction[free] = -1.0 / k
            direction[free[0]] += 1.0
            a = float(direction @ direction)
        b = 2.0 * float(center @ direction)
        c = center_sq - l2_sq
        disc = b * b - 4.0 * a * c
        if disc < 0.0:
            scale = b * b + abs(4.0 * a * c)
            if disc < -FEASIBILITY_SLACK * scale:
                raise NumericalError(
                    f"negative discriminant {disc} in the radial step; the "
                    "norm targets cannot be met at this precision"
                )
            disc = 0.0
        alpha = (-b + math.sqrt(disc)) / (2.0 * a)
        s = center + max(alpha, 0.0) * direction
        # Components pinned at an exact zero of the solution wobble a few ulp
        # negative in the radial move; treat them as zero instead of starting
        # another pass over them.
        if (s >= -FEASIBILITY_SLACK * l2).all():
            return (
                np.maximum(s, 0.0),
                ProjectionTrace(len(zero_set_sizes), tuple(zero_set_sizes)),
            )
        active &= ~(s < 0.0)
        k = int(active.sum())
        if k == 0:
            raise NumericalError("projection pinned every component at zero")
        s[~active] = 0.0
        s[active] -= (float(s.sum()) - l1) / k

    raise NumericalError("projection failed to settle within dimension passes")


def project_signed(x, target: ProjectionTarget):
    """Closest vector to ``x`` with the target norms and the signs of ``x``.

    Projects the magnitudes with ``project_nonneg`` and re-applies the
    original signs; components of ``x`` that were exactly zero stay
    non-negative. Returns the same (vector, trace) pair as ``project_nonneg``.
    """
    x = as_float_vector(x, "x")
    signs = np.where(x < 0.0, -1.0, 1.0)
    s, trace = project_nonneg(np.abs(x), target)
    return signs * s, trace
