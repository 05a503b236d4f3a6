"""Plain-text matrix I/O and grayscale basis-grid export.

Matrix files are either CSV (comma-separated, one row per line, no header)
or whitespace-text (fields split on any whitespace run). Basis grids are
written as binary PGM (P5, maxval 255) with dark pixels for large weights.
"""

import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .model import FactorModel
from .validation import as_float_matrix

FORMAT_CSV = "csv"
FORMAT_WHITESPACE = "whitespace-text"

_SEPARATOR_GRAY = 128


class MatrixParseError(ValueError):
    """A matrix file failed to parse; the message names where."""


def detect_format(path) -> str:
    """Guess the file format: .csv suffix or a comma in the first line means CSV."""
    path = Path(path)
    if path.suffix.lower() == ".csv":
        return FORMAT_CSV
    try:
        with open(path, "r") as fh:
            for line in fh:
                if line.strip():
                    return FORMAT_CSV if "," in line else FORMAT_WHITESPACE
    except OSError:
        pass
    return FORMAT_WHITESPACE


def read_array(path, fmt=None) -> np.ndarray:
    """Parse a rectangular numeric matrix; entries of any sign are allowed.

    Raises ``MatrixParseError`` naming the offending line and column for
    non-numeric tokens, non-finite values, or ragged rows.
    """
    path = Path(path)
    fmt = fmt if fmt is not None else detect_format(path)
    if fmt not in (FORMAT_CSV, FORMAT_WHITESPACE):
        raise ValueError(f"unknown matrix format {fmt!r}")
    rows = []
    width = None
    with open(path, "r") as fh:
        for lineno, line in enumerate(fh, start=1):
            stripped = line.strip()
            if not stripped:
                continue
            tokens = stripped.split(",") if fmt == FORMAT_CSV else stripped.split()
            row = []
            for col, token in enumerate(tokens, start=1):
                token = token.strip()
                try:
                    value = float(token)
                except ValueError:
                    raise MatrixParseError(
                        f"{path}: non-numeric value {token!r} at line {lineno}, "
                        f"column {col}"
                    ) from None
                if not math.isfinite(value):
                    raise MatrixParseError(
                        f"{path}: non-finite value {token!r} at line {lineno}, "
                        f"column {col}"
                    )
                row.append(value)
            if width is None:
                width = len(row)
            elif len(row) != width:
                raise MatrixParseError(
                    f"{path}: row of length {len(row)} at line {lineno}, "
                    f"expected {width}"
                )
            rows.append(row)
    if not rows:
        raise MatrixParseError(f"{path}: no numeric rows found")
    return np.asarray(rows, dtype=np.float64)


def read_matrix(path, fmt=None) -> np.ndarray:
    """Parse a non-negative data matrix; negative entries are a parse error."""
    matrix = read_array(path, fmt)
    negatives = np.argwhere(matrix < 0)
    if negatives.size:
        i, j = negatives[0]
        raise MatrixParseError(
            f"{path}: negative value {matrix[i, j]!r} at row {i + 1}, "
            f"column {j + 1}; data matrices must be non-negative"
        )
    return matrix


def write_matrix(matrix, path, fmt=None) -> None:
    """Write a matrix with 17 significant digits so reads round-trip exactly."""
    matrix = as_float_matrix(matrix, "matrix")
    path = Path(path)
    if fmt is None:
        fmt = FORMAT_CSV if path.suffix.lower() == ".csv" else FORMAT_WHITESPACE
    if fmt not in (FORMAT_CSV, FORMAT_WHITESPACE):
        raise ValueError(f"unknown matrix format {fmt!r}")
    sep = "," if fmt == FORMAT_CSV else " "
    with open(path, "w", newline="\n") as fh:
        for row in matrix:
            fh.write(sep.join("%.17g" % value for value in row))
            fh.write("\n")


@dataclass(frozen=True)
class ImageGridSpec:
    """Layout for rendering basis columns as a tiled grid of image patches."""

    patch_height: int
    patch_width: int
    grid_cols: int
    normalization: str = "per-image"  # or "global"

    def __post_init__(self):
        for name in ("patch_height", "patch_width", "grid_cols"):
            if int(getattr(self, name)) != getattr(self, name) or getattr(self, name) < 1:
                raise ValueError(f"{name} must be a positive integer")
            object.__setattr__(self, name, int(getattr(self, name)))
        if self.normalization not in ("per-image", "global"):
            raise ValueError(
                f"normalization must be 'per-image' or 'global', "
                f"got {self.normalization!r}"
            )


def export_basis_grid(model, spec: ImageGridSpec, path) -> None:
    """Render basis columns as patches in a binary PGM (P5, maxval 255).

    Patches tile left-to-right, top-to-bottom with 1-pixel mid-gray separator
    rows/columns between them. Weights map linearly from [0, max] to pixel
    values [255, 0], so zero weight is white and the peak weight is black;
    the max is taken per column or globally according to the spec. An
    all-zero column renders white. ``model`` may be a FactorModel or a bare
    (n_variables, n_components) basis matrix.
    """
    basis = model.basis if isinstance(model, FactorModel) else as_float_matrix(model, "basis")
    n, m = basis.shape
    if spec.patch_height * spec.patch_width != n:
        raise ValueError(
            f"patch dimensions {spec.patch_height}x{spec.patch_width} do not "
            f"factor the {n} basis rows"
        )
    grid_rows = -(-m // spec.grid_cols)
    height = grid_rows * spec.patch_height + (grid_rows - 1)
    width = spec.grid_cols * spec.patch_width + (spec.grid_cols - 1)
    image = np.full((height, width), _SEPARATOR_GRAY, dtype=np.uint8)
    global_peak = float(basis.max())
    for idx in range(grid_rows * spec.grid_cols):
        row, col = divmod(idx, spec.grid_cols)
        y = row * (spec.patch_height + 1)
        x = col * (spec.patch_width + 1)
        if idx < m:
            patch = basis[:, idx].reshape(spec.patch_height, spec.patch_width)
            peak = float(patch.max()) if spec.normalization == "per-image" else global_peak
            if peak > 0.0:
                pixels = np.rint(255.0 * (1.0 - patch / peak)).astype(np.uint8)
            else:
                pixels = np.full(patch.shape, 255, dtype=np.uint8)
        else:
            pixels = np.full((spec.patch_height, spec.patch_width), 255, dtype=np.uint8)
        image[y:y + spec.patch_height, x:x + spec.patch_width] = pixels
    header = f"P5\n{width} {height}\n255\n".encode("ascii")
    Path(path).write_bytes(header + image.tobytes())
