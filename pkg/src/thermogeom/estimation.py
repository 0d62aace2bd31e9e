"""Temperature estimators and the variance-bound ladder.

An estimator is a diagonal observable ``b_k`` (one value per level) whose
expectation targets ``beta``. Its variance is bounded below by the squared
projections of ``(B - <B>) psi`` onto the orthogonalized derivative frame
of the thermal trajectory; the first two orders give the thermodynamic
uncertainty relation and its curvature-corrected refinement.
"""

from dataclasses import dataclass, field
from math import fsum

import numpy as np

from ._validation import as_vector
from .exceptions import (DegenerateTrajectoryError, DimensionError,
                         InfeasibleConstraintsError, NumericalInconsistencyError)
from .geometry import FRAME_TOL
from .gibbs import thermal_state
from .trajectory import _as_state, bell_derivatives, central_moments, curvature, derivative_frame

CONSTRAINT_TOL = 1e-8
BOUND_SLACK = 1e-10
CURVATURE_TOL = 1e-10

CONSTRUCTIONS = ("locally_unbiased", "grid_unbiased", "user_supplied")


@dataclass(frozen=True)
class Estimator:
    """Diagonal estimator of ``beta``.

    ``constraint_residual`` and ``rank`` are only meaningful for the
    grid-constrained construction.
    """

    values: np.ndarray
    target_beta: float = float("nan")
    construction: str = "user_supplied"
    constraint_residual: float = 0.0
    rank: int = None

    def __post_init__(self):
        object.__setattr__(self, "values", as_vector(self.values, "estimator values"))
        if self.construction not in CONSTRUCTIONS:
            raise ValueError(f"unknown construction {self.construction!r}")


@dataclass(frozen=True)
class BoundReport:
    """Variance-bound ladder at one point of the trajectory.

    ``bound_terms[n]`` is the squared projection onto the n-th frame
    direction divided by that direction's squared norm. Without an estimator
    (``variance is None``) the terms are the estimator-independent values
    ``[0, 1/Var(H), correction/Var(H)]``.
    """

    beta: float
    variance: float
    bound_terms: np.ndarray
    tu_bound: float
    gtu_bound: float
    correction: float
    curvature: float
    skipped_orders: tuple = ()
    frame_norms: np.ndarray = field(default=None, repr=False)

    @property
    def partial_sums(self):
        return np.cumsum(self.bound_terms)

    @property
    def degenerate(self):
        return 2 in self.skipped_orders


def _energy_variance(model, state, tol=FRAME_TOL):
    mean, mu = central_moments(model, state, orders=(2, 3))
    if not mu[2] > tol:
        raise DegenerateTrajectoryError(f"energy variance {mu[2]!r} is not above {tol!r}")
    return mean, mu


def locally_unbiased_estimator(model, beta0):
    """Minimum-variance estimator with ``E[B] = beta0`` and ``dE[B]/dbeta = 1`` at ``beta0``.

    ``b_k = beta0 - (E_k - <H>) / Var(H)``; its variance is exactly
    ``1 / Var(H)``.
    """
    mean, mu = _energy_variance(model, beta0)
    values = float(beta0) - (model.energies - mean) / mu[2]
    return Estimator(values, float(beta0), "locally_unbiased")


def _check_dims(est, n):
    if est.values.shape[0] != n:
        raise DimensionError(f"estimator has {est.values.shape[0]} values but the model has {n} levels")


def estimator_variance(est, state):
    """``Var[B]`` in the given thermal state."""
    _check_dims(est, state.psi.shape[0])
    p = state.probabilities
    mean = fsum(p * est.values)
    return fsum(p * (est.values - mean) ** 2)


def covariance_check(est, model, state):
    """``Cov(B, H)``; equals -1 for estimators unbiased to first order at ``state``."""
    state = _as_state(model, state)
    _check_dims(est, model.n_levels)
    p = state.probabilities
    db = est.values - fsum(p * est.values)
    dh = model.energies - fsum(p * model.energies)
    return fsum(p * db * dh)


def tu_bound(model, beta):
    """Lower bound ``1 / Var(H)`` on the variance of an unbiased estimator of beta."""
    _, mu = _energy_variance(model, beta)
    return 1.0 / mu[2]


def gtu_bound(model, beta, tol=CURVATURE_TOL):
    """Curvature-corrected bound ``(1 + mu3^2 / (mu2^3 K)) / mu2``.

    When the curvature does not exceed ``tol`` the second frame direction
    vanishes (the correction term is 0/0); order 2 is then reported in
    ``skipped_orders`` and the correction is taken as 0.
    """
    state = _as_state(model, beta)
    _, mu = _energy_variance(model, state)
    k = curvature(model, state).curvature
    mu2, mu3 = mu[2], mu[3]
    if k > tol:
        correction = mu3**2 / (mu2**3 * k)
        skipped = ()
    else:
        correction = 0.0
        skipped = (2,)
    return BoundReport(
        beta=state.beta,
        variance=None,
        bound_terms=np.array([0.0, 1.0 / mu2, correction / mu2]),
        tu_bound=1.0 / mu2,
        gtu_bound=(1.0 + correction) / mu2,
        correction=correction,
        curvature=k,
        skipped_orders=skipped,
    )


def bessel_bound(est, model, state, n_max, tol=FRAME_TOL):
    """Variance of ``est`` together with its projections onto the derivative frame.

    Every partial sum of ``bound_terms`` is a lower bound on the variance;
    with the full frame (``n_max = K - 1``) on a model whose frame has no
    degenerate directions the sum equals the variance.

    Raises
    ------
    NumericalInconsistencyError
        If some partial sum exceeds the variance by more than 1e-10.
    """
    state = _as_state(model, state)
    _check_dims(est, model.n_levels)
    frame = derivative_frame(model, state, n_max, tol=tol)
    var = estimator_variance(est, state)
    p = state.probabilities
    v = (est.values - fsum(p * est.values)) * state.psi

    terms = np.zeros(len(frame))
    skipped = []
    for n, (w, sq, degen) in enumerate(zip(frame.vectors, frame.squared_norms, frame.degenerate)):
        if degen:
            skipped.append(n)
            continue
        terms[n] = (v @ w) ** 2 / sq
    partial = np.cumsum(terms)
    if np.any(partial > var + BOUND_SLACK):
        raise NumericalInconsistencyError(
            f"projection sum {partial.max()!r} exceeds variance {var!r} at beta={state.beta!r}"
        )

    try:
        moment = gtu_bound(model, state)
        tu, gtu, corr, k = moment.tu_bound, moment.gtu_bound, moment.correction, moment.curvature
    except DegenerateTrajectoryError:
        tu = gtu = float("inf")
        corr, k = 0.0, float("nan")
    return BoundReport(
        beta=state.beta,
        variance=var,
        bound_terms=terms,
        tu_bound=tu,
        gtu_bound=gtu,
        correction=corr,
        curvature=k,
        skipped_orders=tuple(skipped),
        frame_norms=frame.squared_norms,
    )


def ising_correction_closed_form(N, J, beta):
    """``2 sinh(beta J)^2 / (N - 1)`` for an N-spin chain."""
    if N < 2:
        raise ValueError(f"N must be at least 2, got {N!r}")
    return 2.0 * np.sinh(beta * J) ** 2 / (N - 1)


def _local_rows(model, beta0, order):
    """Rows ``d^r p / d beta^r`` at ``beta0`` and targets ``d^r beta / d beta^r``."""
    derivs = bell_derivatives(model, beta0, order, 1.0)
    targets = [float(beta0), 1.0] + [0.0] * (order - 1)
    return derivs, targets[: order + 1]


def grid_unbiased_estimator(model, beta_grid, beta0, local_order=1, tol=CONSTRAINT_TOL):
    """Minimum-variance estimator unbiased on a grid of temperatures.

    Constraints are ``E_beta[B] = beta`` at every grid point, plus
    ``d^r E[B] / d beta^r = d^r beta / d beta^r`` at ``beta0`` for
    ``r = 1 .. local_order``. The variance at ``beta0`` is minimized by the
    weighted minimum-norm solution of the constraint system.

    Parameters
    ----------
    beta_grid : array_like
        Must contain ``beta0``.
    local_order : int
        Number of derivative constraints at ``beta0``. 1 (the default) makes
        a single-point grid reproduce :func:`locally_unbiased_estimator`;
        2 also pins the second derivative, which is what the curvature
        correction assumes.

    Raises
    ------
    InfeasibleConstraintsError
        If the constraint residual of the solution exceeds ``tol``.
    """
    grid = np.atleast_1d(np.asarray(beta_grid, dtype=float))
    beta0 = float(beta0)
    if local_order < 0:
        raise ValueError("local_order must be nonnegative")
    if not np.any(np.isclose(grid, beta0, rtol=0.0, atol=1e-12)):
        raise ValueError(f"grid must contain beta0={beta0!r}")
    _energy_variance(model, beta0)

    rows, targets = _local_rows(model, beta0, local_order)
    for b in grid:
        if abs(b - beta0) <= 1e-12:
            continue
        rows.append(thermal_state(model, b).probabilities)
        targets.append(float(b))
    A = np.array(rows)
    c = np.array(targets)

    p0 = thermal_state(model, beta0).probabilities
    sqrt_p = np.sqrt(p0)
    M = A / sqrt_p
    row_scale = np.linalg.norm(M, axis=1)
    y, _, rank, _ = np.linalg.lstsq(M / row_scale[:, None], c / row_scale, rcond=None)
    values = y / sqrt_p
    residual = float(np.max(np.abs(A @ values - c)))
    if residual > tol:
        raise InfeasibleConstraintsError(
            f"{A.shape[0]} constraints on {A.shape[1]} levels have no exact solution "
            f"(residual {residual:.3g}, rank {rank})",
            residual=residual,
            rank=int(rank),
        )
    return Estimator(values, beta0, "grid_unbiased", constraint_residual=residual, rank=int(rank))
