"""Real Hilbert space primitives on finite-dimensional state vectors.

Observables are plain arrays: a 1-D array is a diagonal observable given by
its values on the level basis, a 2-D array is a dense symmetric matrix.
"""

from dataclasses import dataclass

import numpy as np

from ._validation import as_observable, as_vector, check_same_length, check_unit

FRAME_TOL = 1e-12


def inner(u, v):
    """Euclidean inner product of two real vectors."""
    u = as_vector(u, "u")
    v = as_vector(v, "v")
    check_same_length(u, v)
    return float(u @ v)


def normalize(v):
    """Scale ``v`` to unit length.

    Raises
    ------
    ValueError
        If ``v`` is the zero vector.
    """
    v = as_vector(v)
    nrm = np.sqrt(v @ v)
    if nrm == 0.0:
        raise ValueError("cannot normalize the zero vector")
    return v / nrm


def apply(X, v):
    """Apply an observable (diagonal or dense) to a vector."""
    if X.ndim == 1:
        return X * v
    return X @ v


def expectation(X, psi):
    """Expectation of ``X`` in the normalised state ``psi``."""
    X = as_observable(X)
    psi = as_vector(psi, "psi")
    check_same_length(X, psi, "observable and state")
    if X.ndim == 1:
        return float(X @ (psi * psi))
    return float(psi @ (X @ psi))


def deviation(X, psi):
    """Return ``X - E_psi[X]`` with the same kind (diagonal or dense) as ``X``."""
    X = as_observable(X)
    mean = expectation(X, psi)
    if X.ndim == 1:
        return X - mean
    return X - mean * np.eye(X.shape[0])


def central_moment(X, psi, n):
    """n-th central moment ``E_psi[(X - E_psi[X])^n]`` for ``n`` in 1..4.

    Dense observables are handled by repeated matrix-vector products with the
    deviation matrix; no matrix powers are formed.
    """
    if n not in (1, 2, 3, 4):
        raise ValueError(f"central moment order must be 1, 2, 3 or 4, got {n!r}")
    psi = as_vector(psi, "psi")
    Xt = deviation(X, psi)
    if Xt.ndim == 1:
        return float((psi * psi) @ Xt**n)
    w = psi
    for _ in range(n):
        w = Xt @ w
    return float(psi @ w)


@dataclass(frozen=True)
class DerivativeFrame:
    """Orthogonalized (not normalized) state and derivative directions.

    Attributes
    ----------
    vectors : list of ndarray
        ``vectors[0]`` is the state; ``vectors[n]`` is the part of the n-th
        input orthogonal to all retained earlier directions.
    squared_norms : ndarray
        Squared length of every entry of ``vectors``.
    degenerate : ndarray of bool
        True where the squared norm fell below the frame tolerance. Such
        directions are excluded from later projections.
    """

    vectors: list
    squared_norms: np.ndarray
    degenerate: np.ndarray

    def __len__(self):
        return len(self.vectors)

    def retained(self):
        return [i for i, d in enumerate(self.degenerate) if not d]


def orthogonalize(raw_derivatives, tol=FRAME_TOL):
    """Gram-Schmidt without normalization, skipping degenerate directions.

    Uses modified Gram-Schmidt with a second reorthogonalization pass, which
    keeps the retained directions orthogonal to working precision even when
    the inputs are close to linearly dependent.

    Parameters
    ----------
    raw_derivatives : sequence of array_like
        First entry must be a unit vector.
    tol : float
        Directions with squared norm below ``tol`` are flagged degenerate.
    """
    vecs = [as_vector(v) for v in raw_derivatives]
    if not vecs:
        raise ValueError("orthogonalize needs at least one vector")
    for v in vecs[1:]:
        check_same_length(vecs[0], v, "frame vectors")
    check_unit(vecs[0], tol=1e-10, name="first frame vector")

    basis = []  # (vector, squared norm) of retained directions
    out, norms, flags = [], [], []
    for v in vecs:
        w = v.copy()
        for _ in range(2):
            for b, bb in basis:
                w -= (b @ w) / bb * b
        sq = float(w @ w)
        degenerate = sq < tol
        if not degenerate:
            basis.append((w, sq))
        out.append(w)
        norms.append(sq)
        flags.append(degenerate)
    return DerivativeFrame(out, np.array(norms), np.array(flags, dtype=bool))
