"""Input validation helpers shared by the whole package."""

import numpy as np


def as_float_vector(x, name="vector"):
    """Coerce ``x`` to a finite 1-D float64 array or raise ``ValueError``."""
    arr = np.asarray(x, dtype=np.float64)
    if arr.ndim != 1:
        raise ValueError(f"{name} must be 1-dimensional, got shape {arr.shape}")
    if arr.size == 0:
        raise ValueError(f"{name} must not be empty")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains non-finite values")
    return arr


def as_float_matrix(x, name="matrix"):
    """Coerce ``x`` to a finite 2-D float64 array or raise ``ValueError``."""
    arr = np.asarray(x, dtype=np.float64)
    if arr.ndim != 2:
        raise ValueError(f"{name} must be 2-dimensional, got shape {arr.shape}")
    if arr.shape[0] == 0 or arr.shape[1] == 0:
        raise ValueError(f"{name} must have at least one row and one column")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains non-finite values")
    return arr


def check_non_negative(arr, name="matrix"):
    """Raise ``ValueError`` if any entry of ``arr`` is negative."""
    if np.any(arr < 0):
        raise ValueError(f"{name} must be elementwise non-negative")
    return arr


def check_data_matrix(data):
    """Validate a data matrix: 2-D, finite, non-empty, elementwise >= 0."""
    return check_non_negative(as_float_matrix(data, "data matrix"), "data matrix")
