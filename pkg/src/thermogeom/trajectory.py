"""Differential geometry of the thermal trajectory ``beta -> psi(beta)``.

Everything here is analytic. Derivatives of the state are generated from
the cumulants of the energy: ``log psi_k`` has first derivative
``-(E_k - <H>)/2`` and n-th derivative ``-(-1)^n kappa_n / 2`` for
``n >= 2``, so ``d^n psi / d beta^n = Y_n * psi`` with ``Y_n`` the complete
Bell polynomial in those log-derivatives.
"""

from dataclasses import dataclass
from math import comb, fsum

import numpy as np

from .exceptions import DegenerateTrajectoryError, NumericalInconsistencyError
from .geometry import FRAME_TOL, orthogonalize
from .gibbs import ThermalState, thermal_state

CURVATURE_RTOL = 1e-8
CURVATURE_ATOL = 1e-10


def _as_state(model, state):
    if isinstance(state, ThermalState):
        return state
    return thermal_state(model, state)


def _require_single(model):
    if model.n_params != 1:
        raise ValueError(f"trajectory operations need a one-parameter family, got m={model.n_params}")


def central_moments(model, state, orders=(2, 3, 4), j=0):
    """Mean and central moments of ``H_j`` in ``state``.

    Returns
    -------
    mean : float
    moments : dict
        ``{n: <(H - <H>)^n>}`` for each requested order.
    """
    state = _as_state(model, state)
    p = state.probabilities
    H = model.hamiltonians[j]
    # compensated sums: the curvature formula cancels heavily at low temperature
    mean = fsum(p * H)
    d = H - mean
    return mean, {n: fsum(p * d**n) for n in orders}


def energy_cumulants(model, state, n_max):
    """Cumulants ``kappa_2 .. kappa_n_max`` of the energy (``kappa_1`` is the mean)."""
    _, mu = central_moments(model, state, orders=range(2, n_max + 1))
    mu[0], mu[1] = 1.0, 0.0
    kappa = {1: 0.0}
    for n in range(2, n_max + 1):
        kappa[n] = mu[n] - sum(comb(n - 1, k - 1) * kappa[k] * mu[n - k] for k in range(2, n - 1))
    return kappa


def _variance_or_raise(mu2, tol=FRAME_TOL):
    if not mu2 > tol:
        raise DegenerateTrajectoryError(f"energy variance {mu2!r} is not above {tol!r}")


def velocity(model, state):
    """``d psi / d beta = -0.5 * (H - <H>) psi``."""
    _require_single(model)
    state = _as_state(model, state)
    mean, _ = central_moments(model, state, orders=())
    return -0.5 * (model.energies - mean) * state.psi


def acceleration(model, state, tol=FRAME_TOL):
    """Component of the second derivative orthogonal to the state and velocity.

    Raises
    ------
    DegenerateTrajectoryError
        If the energy variance does not exceed ``tol``.
    """
    _require_single(model)
    state = _as_state(model, state)
    mean, mu = central_moments(model, state, orders=(2, 3))
    _variance_or_raise(mu[2], tol)
    d = model.energies - mean
    psi = state.psi
    return 0.25 * (d * d - (mu[3] / mu[2]) * d - mu[2]) * psi


@dataclass(frozen=True)
class CurvatureReport:
    beta: float
    speed_squared: float
    acceleration_squared: float
    curvature: float
    moments: dict


def curvature(model, state, tol=FRAME_TOL):
    """Curvature of the thermal trajectory from energy moments.

    The value ``mu4/mu2^2 - mu3^2/mu2^3 - 1`` is cross-checked against
    ``|psi_2|^2 / |psi_1|^4``; a disagreement beyond tolerance raises
    :class:`NumericalInconsistencyError`. Negative rounding is clamped to 0.
    """
    _require_single(model)
    state = _as_state(model, state)
    _, mu = central_moments(model, state)
    _variance_or_raise(mu[2], tol)
    k_moments = mu[4] / mu[2] ** 2 - mu[3] ** 2 / mu[2] ** 3 - 1.0

    v1 = velocity(model, state)
    v2 = acceleration(model, state, tol)
    speed2 = float(v1 @ v1)
    acc2 = float(v2 @ v2)
    k_ratio = acc2 / speed2**2
    # rounding in the moment form grows with the size of the cancelling terms
    scale = mu[4] / mu[2] ** 2 + mu[3] ** 2 / mu[2] ** 3
    tol = CURVATURE_RTOL * max(abs(k_moments), abs(k_ratio)) + CURVATURE_ATOL + 1e3 * np.finfo(float).eps * scale
    if abs(k_moments - k_ratio) > tol:
        raise NumericalInconsistencyError(
            f"curvature from moments {k_moments!r} disagrees with derivative ratio {k_ratio!r} "
            f"at beta={state.beta!r}"
        )
    return CurvatureReport(
        beta=state.beta,
        speed_squared=speed2,
        acceleration_squared=acc2,
        curvature=max(k_moments, 0.0),
        moments=mu,
    )


def bell_derivatives(model, state, n_max, scale):
    """Derivatives ``d^n f / d beta^n``, ``n = 0 .. n_max``, of ``f = exp(scale * log p)``.

    ``scale = 0.5`` gives the state vector and ``scale = 1`` the level
    probabilities.
    """
    _require_single(model)
    state = _as_state(model, state)
    kappa = energy_cumulants(model, state, max(n_max, 2))
    mean, _ = central_moments(model, state, orders=())
    logd = {1: -scale * (model.energies - mean)}
    for n in range(2, n_max + 1):
        logd[n] = -scale * (-1) ** n * kappa[n]
    bell = [np.ones(model.n_levels)]
    for n in range(n_max):
        bell.append(sum(comb(n, i) * logd[i + 1] * bell[n - i] for i in range(n + 1)))
    base = state.psi if scale == 0.5 else np.exp(scale * state.log_probabilities)
    return [b * base for b in bell]


def state_derivatives(model, state, n_max):
    """Raw derivatives ``d^n psi / d beta^n`` for ``n = 0 .. n_max``."""
    return bell_derivatives(model, state, n_max, 0.5)


def derivative_frame(model, state, n_max, tol=FRAME_TOL):
    """Orthogonalized frame ``psi_0 .. psi_n_max`` along the trajectory.

    ``n_max`` may not exceed ``K - 1``. Directions that vanish (such as the
    second one for any two-level system) are flagged degenerate.
    """
    if n_max < 0 or n_max > model.n_levels - 1:
        raise ValueError(f"n_max must be in [0, {model.n_levels - 1}], got {n_max!r}")
    return orthogonalize(state_derivatives(model, state, n_max), tol=tol)


@dataclass(frozen=True)
class FisherRaoMetric:
    theta: np.ndarray
    matrix: np.ndarray


def fisher_rao_metric(model, theta):
    """Fisher-Rao metric as the covariance matrix of the Hamiltonians.

    This is also the Hessian of the log-partition function.
    """
    state = thermal_state(model, theta)
    p = state.probabilities
    H = model.hamiltonians
    D = H - (H @ p)[:, np.newaxis]
    G = (D * p) @ D.T
    return FisherRaoMetric(theta=state.theta, matrix=0.5 * (G + G.T))


def fisher_rao_embedding(model, theta):
    """Fisher-Rao metric as ``4 <d_i psi, d_j psi>`` from the state derivatives."""
    state = thermal_state(model, theta)
    p = state.probabilities
    H = model.hamiltonians
    dpsi = -0.5 * (H - (H @ p)[:, np.newaxis]) * state.psi
    return 4.0 * dpsi @ dpsi.T


def heat_capacity(model, beta):
    """``C = beta^2 * Var(H)``; zero at ``beta = 0``."""
    _require_single(model)
    _, mu = central_moments(model, beta, orders=(2,))
    return float(beta) ** 2 * mu[2]


def metric_beta_derivative(model, beta):
    """Derivative of the one-parameter metric ``G = Var(H)`` with respect to beta.

    Since ``d<H>/d beta = -Var(H)``, differentiating ``sum p (H - <H>)^2``
    gives ``-<(H - <H>)^3>``.
    """
    _require_single(model)
    _, mu = central_moments(model, beta, orders=(3,))
    return -mu[3]
