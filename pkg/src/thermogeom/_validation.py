"""Input validation helpers shared by the public functions."""

import numpy as np

from .exceptions import DimensionError

UNIT_NORM_TOL = 1e-12
SYMMETRY_TOL = 1e-12


def as_vector(x, name="vector"):
    v = np.asarray(x, dtype=float)
    if v.ndim != 1:
        raise DimensionError(f"{name} must be one-dimensional, got shape {v.shape}")
    return v


def as_observable(X, name="observable"):
    """Return ``X`` as a float array: 1-D for a diagonal observable, 2-D for dense.

    Dense observables must be square and symmetric.
    """
    A = np.asarray(X, dtype=float)
    if A.ndim == 1:
        return A
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise DimensionError(f"{name} must be a vector or a square matrix, got shape {A.shape}")
    if not np.allclose(A, A.T, rtol=0.0, atol=SYMMETRY_TOL):
        raise ValueError(f"{name} is not symmetric")
    return A


def check_same_length(u, v, what="operands"):
    if u.shape[0] != v.shape[0]:
        raise DimensionError(f"{what} have mismatched dimensions {u.shape[0]} and {v.shape[0]}")


def check_unit(psi, tol=UNIT_NORM_TOL, name="state"):
    sq = float(psi @ psi)
    if abs(sq - 1.0) > tol:
        raise ValueError(f"{name} is not unit norm (squared norm {sq!r})")


def as_theta(theta, m):
    """Coerce a scalar or sequence to a finite parameter vector of length ``m``."""
    t = np.atleast_1d(np.asarray(theta, dtype=float))
    if t.ndim != 1 or t.shape[0] != m:
        raise DimensionError(f"theta must have length {m}, got shape {t.shape}")
    if not np.all(np.isfinite(t)):
        raise ValueError(f"theta must be finite, got {t}")
    return t
