"""Input validation helpers shared across modules."""

from __future__ import annotations

import numpy as np

from .exceptions import InputError, NumericError

SYMMETRY_RTOL = 1e-12


def as_vector(x, name: str = "x", dim: int | None = None) -> np.ndarray:
    """Return ``x`` as a finite 1-D float array, optionally of length ``dim``."""
    arr = np.asarray(x, dtype=float)
    if arr.ndim == 0:
        arr = arr.reshape(1)
    if arr.ndim != 1:
        raise InputError(f"{name} must be a vector, got shape {arr.shape}")
    if dim is not None and arr.shape[0] != dim:
        raise InputError(f"{name} has length {arr.shape[0]}, expected {dim}")
    if not np.all(np.isfinite(arr)):
        raise InputError(f"{name} contains non-finite values")
    return arr


def as_spd_matrix(c, name: str = "cov", rtol: float = SYMMETRY_RTOL) -> np.ndarray:
    """Validate a symmetric positive definite matrix.

    Scalars and 1-element inputs are promoted to ``1x1``. Symmetry is checked
    relative to the largest absolute entry; the returned matrix is exactly
    symmetrized.
    """
    arr = np.asarray(c, dtype=float)
    if arr.ndim == 0:
        arr = arr.reshape(1, 1)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] == 0:
        raise InputError(f"{name} must be a nonempty square matrix, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise InputError(f"{name} contains non-finite values")
    scale = max(np.max(np.abs(arr)), np.finfo(float).tiny)
    if np.max(np.abs(arr - arr.T)) > rtol * scale:
        raise InputError(f"{name} is not symmetric")
    arr = 0.5 * (arr + arr.T)
    if np.linalg.eigvalsh(arr)[0] <= 0:
        raise NumericError(f"{name} is not positive definite")
    return arr


def check_order(order: int) -> int:
    if order not in (0, 2, 4):
        raise InputError(f"order must be 0, 2 or 4, got {order!r}")
    return int(order)


def check_ways(ways: int) -> int:
    if ways not in (2, 4):
        raise InputError(f"ways must be 2 or 4, got {ways!r}")
    return int(ways)
