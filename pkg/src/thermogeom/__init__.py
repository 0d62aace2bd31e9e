"""Thermal states of finite classical models as curves on the unit sphere.

Gibbs distributions are embedded through the square root of their level
probabilities; the package computes the resulting Fisher-Rao geometry,
trajectory curvature, variance bounds for temperature estimators,
measurement statistics and the Schrodinger-flow analogue.
"""

from .estimation import (BoundReport, Estimator, bessel_bound, covariance_check, estimator_variance,
                         grid_unbiased_estimator, gtu_bound, ising_correction_closed_form,
                         locally_unbiased_estimator, tu_bound)
from .exceptions import (DegenerateTrajectoryError, DimensionError, InfeasibleConstraintsError,
                         NumericalInconsistencyError, SchemaError)
from .geometry import (DerivativeFrame, central_moment, deviation, expectation, inner, normalize,
                       orthogonalize)
from .gibbs import (GibbsFamily, ThermalState, boltzmann_weights, infinite_temperature_state,
                    log_partition, state_derivative, thermal_state)
from .measurement import (SpectralMeasurement, configuration_distribution, outcome_distribution,
                          sample_configurations, spectral_measurement)
from .models import from_spectrum_file, independent_bond_chain, ising_chain, two_level
from .quantum import (ComplexStructure, QuantumTrajectory, anandan_aharonov_check, evolve_trajectory,
                      quantum_time_bound, schrodinger_evolve, standard_complex_structure)
from .trajectory import (CurvatureReport, FisherRaoMetric, acceleration, curvature, derivative_frame,
                         fisher_rao_embedding, fisher_rao_metric, heat_capacity, metric_beta_derivative,
                         velocity)

__version__ = "0.1.0"
