"""Gibbs families and their thermal state vectors.

A family assigns to every parameter vector ``theta`` the distribution

    p_k(theta) = w_k q_k exp(-sum_j theta_j H_j[k] - W(theta))

over a finite set of levels, where ``w_k`` is a level multiplicity and
``q_k`` a base weight. The state vector is the componentwise square root
of ``p``. Boltzmann's constant is 1 throughout, so ``beta`` has units of
inverse energy.
"""

from dataclasses import dataclass, field

import numpy as np
from scipy.special import logsumexp

from ._validation import as_theta
from .exceptions import DimensionError


def _frozen(a):
    a = np.array(a)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class GibbsFamily:
    """Exponential family over ``K`` levels with ``m`` energy observables.

    Parameters
    ----------
    hamiltonians : array_like, shape (m, K) or (K,)
        Diagonal energy observables. A 1-D input is a single Hamiltonian.
    base_weights : array_like, shape (K,), optional
        Positive weights ``q_k`` defining the ``theta = 0`` measure.
    multiplicity : array_like, shape (K,), optional
        Integer degeneracy of every level, folded into the effective weight.
    labels : sequence of str, optional
    names : sequence of str, optional
        One name per Hamiltonian.
    """

    hamiltonians: np.ndarray
    base_weights: np.ndarray = None
    multiplicity: np.ndarray = None
    labels: tuple = None
    names: tuple = None
    log_weights: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        H = np.asarray(self.hamiltonians, dtype=float)
        if H.ndim == 1:
            H = H[np.newaxis, :]
        if H.ndim != 2 or H.shape[0] < 1 or H.shape[1] < 1:
            raise DimensionError(f"hamiltonians must have shape (m, K), got {H.shape}")
        if not np.all(np.isfinite(H)):
            raise ValueError("energies must be finite")
        m, K = H.shape

        q = np.ones(K) if self.base_weights is None else np.asarray(self.base_weights, dtype=float)
        mult = np.ones(K) if self.multiplicity is None else np.asarray(self.multiplicity, dtype=float)
        if q.shape != (K,) or mult.shape != (K,):
            raise DimensionError("base_weights and multiplicity must have one entry per level")
        if not np.all(np.isfinite(q) & (q > 0)):
            raise ValueError("base weights must be positive and finite")
        if not np.all(mult == np.round(mult)) or np.any(mult < 1):
            raise ValueError("multiplicities must be integers >= 1")

        labels = self.labels
        if labels is not None:
            labels = tuple(str(s) for s in labels)
            if len(labels) != K:
                raise DimensionError("labels must have one entry per level")
        names = self.names
        if names is None:
            names = ("energy",) + tuple(f"H{j}" for j in range(1, m))
        names = tuple(names)
        if len(names) != m:
            raise DimensionError("names must have one entry per Hamiltonian")

        # multiplicities stay float so binomial degeneracies beyond int64 still fit
        log_w = np.log(mult) + np.log(q)

        object.__setattr__(self, "hamiltonians", _frozen(H))
        object.__setattr__(self, "base_weights", _frozen(q))
        object.__setattr__(self, "multiplicity", _frozen(mult))
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "names", names)
        object.__setattr__(self, "log_weights", _frozen(log_w))

    @property
    def n_levels(self):
        return self.hamiltonians.shape[1]

    @property
    def n_params(self):
        return self.hamiltonians.shape[0]

    @property
    def energies(self):
        """The first Hamiltonian, the energy of a one-parameter thermal family."""
        return self.hamiltonians[0]

    def level_labels(self):
        if self.labels is not None:
            return self.labels
        return tuple(str(k) for k in range(self.n_levels))


@dataclass(frozen=True)
class ThermalState:
    """A point of the thermal manifold.

    ``log_partition`` is the absolute ``W(theta)``, built from the
    unnormalized effective weights ``w_k q_k``.
    """

    theta: np.ndarray
    psi: np.ndarray
    log_partition: float
    log_probabilities: np.ndarray = field(repr=False, compare=False)
    reference_log_partition: float = field(default=0.0, repr=False)

    @property
    def beta(self):
        if self.theta.shape[0] != 1:
            raise ValueError("beta is only defined for one-parameter states")
        return float(self.theta[0])

    @property
    def relative_log_partition(self):
        """``W(theta) - W(0)``."""
        return self.log_partition - self.reference_log_partition

    @property
    def probabilities(self):
        return np.exp(self.log_probabilities)


def _exponents(model, theta):
    t = as_theta(theta, model.n_params)
    return t, model.log_weights - t @ model.hamiltonians


def log_partition(model, theta):
    """Log of the partition function, evaluated by shifted log-sum-exp."""
    _, a = _exponents(model, theta)
    return float(logsumexp(a))


def thermal_state(model, theta):
    """Square-root Gibbs state at ``theta``.

    Examples
    --------
    >>> m = GibbsFamily([0.0, 1.0])
    >>> np.round(thermal_state(m, np.log(3)).psi**2, 12)
    array([0.75, 0.25])
    """
    t, a = _exponents(model, theta)
    W = float(logsumexp(a))
    log_p = a - W
    return ThermalState(
        theta=_frozen(t),
        psi=_frozen(np.exp(0.5 * log_p)),
        log_partition=W,
        log_probabilities=_frozen(log_p),
        reference_log_partition=float(logsumexp(model.log_weights)),
    )


def infinite_temperature_state(model):
    """The centre point: the state at ``theta = 0``."""
    return thermal_state(model, np.zeros(model.n_params))


def boltzmann_weights(model, theta):
    """Level probabilities ``p_k``, the squared components of the state."""
    return thermal_state(model, theta).probabilities


def mean_energy(model, state, j=0):
    return float(state.probabilities @ model.hamiltonians[j])


def state_derivative(model, state, j=0):
    """Derivative of the state vector with respect to ``theta_j``.

    Returns ``-0.5 * (H_j - <H_j>) * psi``, which is orthogonal to ``psi``.
    """
    if not 0 <= j < model.n_params:
        raise IndexError(f"parameter index {j} out of range for m={model.n_params}")
    H = model.hamiltonians[j]
    return -0.5 * (H - mean_energy(model, state, j)) * state.psi
