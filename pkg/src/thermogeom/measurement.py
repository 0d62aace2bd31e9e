"""Projective measurements on thermal and general states."""

from dataclasses import dataclass

import numpy as np

from ._validation import as_observable, as_vector, check_same_length
from .gibbs import boltzmann_weights, thermal_state
from .tables import fmt, to_csv

GENERATOR_ID = "numpy.random.PCG64/inverse-cdf"
SAMPLE_COLUMNS = ("level_label", "energy", "expected_probability", "observed_count")


@dataclass(frozen=True)
class Outcome:
    """One eigenvalue of an observable and an orthonormal basis of its eigenspace.

    For diagonal observables ``basis`` is an integer array of level indices
    (the eigenspace is spanned by those coordinate vectors); otherwise it is
    a ``(K, rank)`` array with orthonormal columns.
    """

    value: float
    basis: np.ndarray

    @property
    def rank(self):
        return self.basis.shape[0] if self.basis.ndim == 1 else self.basis.shape[1]

    def probability(self, psi):
        """``|P psi|^2``."""
        if self.basis.ndim == 1:
            return float(np.sum(psi[self.basis] ** 2))
        c = self.basis.T @ psi
        return float(c @ c)

    def projector(self, K):
        if self.basis.ndim == 1:
            P = np.zeros((K, K))
            P[self.basis, self.basis] = 1.0
            return P
        return self.basis @ self.basis.T


@dataclass(frozen=True)
class SpectralMeasurement:
    outcomes: tuple
    source: np.ndarray

    @property
    def values(self):
        return np.array([o.value for o in self.outcomes])

    @property
    def dimension(self):
        return self.source.shape[0]

    def reconstruct(self):
        """``sum_a x_a P_a`` as a dense matrix."""
        K = self.dimension
        return sum(o.value * o.projector(K) for o in self.outcomes)


def _clusters(values, tol):
    """Split sorted ``values`` wherever consecutive entries differ by more than ``tol``."""
    breaks = np.flatnonzero(np.diff(values) > tol) + 1
    return np.split(np.arange(values.shape[0]), breaks)


def spectral_measurement(X, cluster_tol=None):
    """Eigen-resolution of a symmetric observable into projection-valued outcomes.

    Eigenvalues closer than ``cluster_tol`` (default ``1e-12 * max|x|``) are
    merged into one outcome whose value is their mean.
    """
    X = as_observable(X)
    if X.ndim == 1:
        order = np.argsort(X, kind="stable")
        vals = X[order]
        vecs = None
    else:
        vals, vecs = np.linalg.eigh(X)
        order = np.arange(vals.shape[0])
    if cluster_tol is None:
        cluster_tol = 1e-12 * max(float(np.max(np.abs(vals))), 1.0)

    outcomes = []
    for group in _clusters(vals, cluster_tol):
        value = float(np.mean(vals[group]))
        basis = np.sort(order[group]) if vecs is None else vecs[:, group]
        outcomes.append(Outcome(value, basis))
    return SpectralMeasurement(tuple(outcomes), X)


def outcome_distribution(meas, psi):
    """List of ``(value, probability)`` pairs for measuring ``meas`` in state ``psi``."""
    psi = as_vector(psi, "psi")
    check_same_length(meas.source, psi, "measurement and state")
    return [(o.value, o.probability(psi)) for o in meas.outcomes]


def configuration_distribution(model, beta):
    """Probabilities of projecting the thermal state onto each level basis vector."""
    psi = thermal_state(model, beta).psi
    return psi * psi


def sample_configurations(model, beta, count, seed):
    """Draw ``count`` level indices from the Boltzmann weights and return per-level counts.

    Sampling is inverse-CDF on uniform variates from numpy's PCG64 generator
    seeded with ``seed``, so equal arguments give equal counts.
    """
    if not isinstance(count, (int, np.integer)) or count < 1:
        raise ValueError(f"count must be a positive integer, got {count!r}")
    p = boltzmann_weights(model, beta)
    cdf = np.cumsum(p)
    cdf[-1] = 1.0
    rng = np.random.Generator(np.random.PCG64(seed))
    idx = np.searchsorted(cdf, rng.random(count), side="right")
    return np.bincount(idx, minlength=p.shape[0])


def format_sample_table(model, beta, counts, seed=None):
    """Render sample counts as CSV with a leading metadata comment."""
    p = boltzmann_weights(model, beta)
    rows = zip(model.level_labels(), model.energies, p, counts)
    meta = f"generator={GENERATOR_ID} seed={seed} beta={fmt(float(beta))} count={int(np.sum(counts))}"
    return to_csv(SAMPLE_COLUMNS, rows, comments=[meta])
