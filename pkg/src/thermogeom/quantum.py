"""Schrodinger trajectories on a real Hilbert space with a complex structure.

With a compatible complex structure ``J`` (orthogonal, ``J^2 = -1``) the
real space becomes complex, and a symmetric ``H`` commuting with ``J`` is a
quantum Hamiltonian. The state obeys ``d xi/dt = J (H - <H>) xi`` with
hbar = 1.
"""

from dataclasses import dataclass

import numpy as np

from ._validation import as_observable, as_vector, check_same_length, check_unit
from .exceptions import DegenerateTrajectoryError, DimensionError
from .geometry import FRAME_TOL, central_moment, expectation

STRUCTURE_TOL = 1e-12
COMMUTATOR_TOL = 1e-10


@dataclass(frozen=True)
class ComplexStructure:
    matrix: np.ndarray

    def __post_init__(self):
        J = np.asarray(self.matrix, dtype=float)
        n = J.shape[0]
        if J.ndim != 2 or J.shape != (n, n) or n % 2:
            raise DimensionError(f"complex structure must be square of even size, got {J.shape}")
        eye = np.eye(n)
        if not np.allclose(J @ J, -eye, rtol=0, atol=STRUCTURE_TOL):
            raise ValueError("J @ J is not -identity")
        if not np.allclose(J.T @ J, eye, rtol=0, atol=STRUCTURE_TOL):
            raise ValueError("J is not orthogonal")
        object.__setattr__(self, "matrix", J)

    @property
    def dimension(self):
        return self.matrix.shape[0]


def standard_complex_structure(half_dim):
    """Block structure ``(u, v) -> (-v, u)`` on ``R^(2 half_dim)``."""
    if half_dim < 1:
        raise ValueError(f"half_dim must be >= 1, got {half_dim!r}")
    z, eye = np.zeros((half_dim, half_dim)), np.eye(half_dim)
    return ComplexStructure(np.block([[z, -eye], [eye, z]]))


def _dense(H):
    H = as_observable(H, "hamiltonian")
    return np.diag(H) if H.ndim == 1 else H


def commutator_norm(H, J):
    H = _dense(H)
    return float(np.max(np.abs(H @ J.matrix - J.matrix @ H)))


def _generator(H, J, xi0):
    H = _dense(H)
    xi0 = as_vector(xi0, "xi0")
    check_same_length(H, xi0, "hamiltonian and state")
    check_same_length(J.matrix, xi0, "complex structure and state")
    check_unit(xi0, tol=1e-10, name="initial state")
    c = commutator_norm(H, J)
    if c > COMMUTATOR_TOL:
        raise ValueError(f"hamiltonian does not commute with J (max |[H, J]| = {c:.3g})")
    Ht = H - expectation(H, xi0) * np.eye(H.shape[0])
    return J.matrix @ Ht


def _flow(A, xi0, times):
    # A is real antisymmetric, so iA is Hermitian and exp(tA) = V exp(-i t w) V^H
    w, V = np.linalg.eigh(1j * A)
    c = V.conj().T @ xi0
    out = [np.real(V @ (np.exp(-1j * t * w) * c)) for t in times]
    return np.array(out)


def schrodinger_evolve(H, J, xi0, t):
    """State at time ``t`` under the constant generator ``J (H - <H>)``.

    The exponential is taken through the eigendecomposition of the Hermitian
    matrix ``i J (H - <H>)``, so the flow is orthogonal to working precision
    for any ``t``.
    """
    A = _generator(H, J, xi0)
    return _flow(A, np.asarray(xi0, dtype=float), [float(t)])[0]


@dataclass(frozen=True)
class QuantumTrajectory:
    times: np.ndarray
    states: np.ndarray
    hamiltonian: np.ndarray
    structure: ComplexStructure


def evolve_trajectory(H, J, xi0, times):
    A = _generator(H, J, xi0)
    times = as_vector(times, "times")
    states = _flow(A, np.asarray(xi0, dtype=float), times)
    return QuantumTrajectory(times, states, _dense(H), J)


def quantum_velocity(H, J, xi):
    """``J (H - <H>) xi``."""
    H = _dense(H)
    Ht = H - expectation(H, xi) * np.eye(H.shape[0])
    return J.matrix @ (Ht @ xi)


def anandan_aharonov_check(traj):
    """``G(t) = 4 |d xi/dt|^2`` at every sample; constant along the flow."""
    if len(traj.times) == 0:
        raise ValueError("trajectory is empty")
    G = []
    for xi in traj.states:
        v = quantum_velocity(traj.hamiltonian, traj.structure, xi)
        G.append(4.0 * float(v @ v))
    return np.array(G)


def quantum_time_bound(H, J, xi):
    """Lower bound ``1 / (4 Var(H))`` on the variance of an unbiased time estimate."""
    H = _dense(H)
    xi = as_vector(xi, "xi")
    check_same_length(J.matrix, xi, "complex structure and state")
    var = central_moment(H, xi, 2)
    if not var > FRAME_TOL:
        raise DegenerateTrajectoryError(f"energy variance {var!r} is not above {FRAME_TOL!r}; no time bound")
    return 1.0 / (4.0 * var)


def random_commuting_pair(half_dim, rng):
    """Random symmetric ``H`` commuting with the standard structure.

    ``H = [[A, -S], [S, A]]`` with ``A`` symmetric and ``S`` antisymmetric,
    the real form of the Hermitian matrix ``A + iS``.
    """
    J = standard_complex_structure(half_dim)
    X = rng.normal(size=(half_dim, half_dim))
    Y = rng.normal(size=(half_dim, half_dim))
    A = 0.5 * (X + X.T)
    S = 0.5 * (Y - Y.T)
    return np.block([[A, -S], [S, A]]), J
