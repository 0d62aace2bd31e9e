import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from thermogeom import (DegenerateTrajectoryError, DimensionError, Estimator, GibbsFamily,
                        InfeasibleConstraintsError, bessel_bound, covariance_check, estimator_variance,
                        grid_unbiased_estimator, gtu_bound, independent_bond_chain, ising_chain,
                        ising_correction_closed_form, locally_unbiased_estimator, thermal_state, tu_bound)
from thermogeom.trajectory import central_moments

from conftest import LN3
from modelgen import random_model

seeds = st.integers(0, 2**32 - 1)
betas = st.floats(-3, 3)


def test_locally_unbiased_two_level(two_lvl):
    est = locally_unbiased_estimator(two_lvl, LN3)
    assert est.construction == "locally_unbiased"
    var = estimator_variance(est, thermal_state(two_lvl, LN3))
    assert var == pytest.approx(16 / 3, rel=1e-12)
    assert var * 3 / 16 == pytest.approx(1.0, abs=1e-12)


def test_locally_unbiased_constant_spectrum():
    with pytest.raises(DegenerateTrajectoryError):
        locally_unbiased_estimator(GibbsFamily([1.0, 1.0, 1.0]), 0.5)
    with pytest.raises(DegenerateTrajectoryError):
        tu_bound(GibbsFamily([1.0, 1.0]), 0.5)


@settings(max_examples=100, deadline=None)
@given(seeds, betas)
def test_locally_unbiased_conditions(seed, beta):
    m = random_model(np.random.default_rng(seed))
    est = locally_unbiased_estimator(m, beta)
    s = thermal_state(m, beta)
    p = s.probabilities
    assert math.fsum(p * est.values) == pytest.approx(beta, abs=1e-10)
    assert covariance_check(est, m, s) == pytest.approx(-1.0, abs=1e-10)
    _, mu = central_moments(m, s, orders=(2,))
    assert estimator_variance(est, s) * mu[2] == pytest.approx(1.0, abs=1e-12)


def test_estimator_validation(two_lvl):
    with pytest.raises(ValueError):
        Estimator([0.0, 1.0], construction="magic")
    with pytest.raises(DimensionError):
        estimator_variance(Estimator([0.0, 1.0, 2.0]), thermal_state(two_lvl, 0.0))
    assert estimator_variance(Estimator([2.5, 2.5]), thermal_state(two_lvl, 0.3)) == 0.0


def test_tu_bound_example(two_lvl):
    assert tu_bound(two_lvl, LN3) == pytest.approx(16 / 3, rel=1e-14)


def test_gtu_two_level_degenerate(two_lvl):
    rep = gtu_bound(two_lvl, LN3)
    assert rep.degenerate
    assert rep.correction == 0.0
    assert rep.gtu_bound == pytest.approx(rep.tu_bound, rel=1e-15)


def test_gtu_symmetric_spectrum_at_zero():
    rep = gtu_bound(GibbsFamily([-1.0, 0.0, 1.0]), 0.0)
    assert not rep.degenerate
    assert rep.correction == pytest.approx(0.0, abs=1e-15)
    assert rep.gtu_bound == pytest.approx(rep.tu_bound, rel=1e-14)


def test_gtu_skewed_three_level():
    m = GibbsFamily([0.0, 1.0, 3.0])
    rep = gtu_bound(m, 0.4)
    assert rep.correction > 0
    assert rep.gtu_bound > rep.tu_bound
    _, mu = central_moments(m, 0.4)
    k = mu[4] / mu[2] ** 2 - mu[3] ** 2 / mu[2] ** 3 - 1
    assert rep.correction == pytest.approx(mu[3] ** 2 / (mu[2] ** 3 * k), rel=1e-12)
    np.testing.assert_allclose(rep.bound_terms, [0, 1 / mu[2], rep.correction / mu[2]], rtol=1e-14)


@pytest.mark.parametrize("n", [2, 4, 8, 16, 64])
@pytest.mark.parametrize("J, beta", [(1.0, 0.5), (1.0, 1.0), (0.7, 2.0)])
def test_gtu_independent_bonds_closed_form(n, J, beta):
    rep = gtu_bound(independent_bond_chain(n, J), beta)
    assert rep.correction == pytest.approx(2 * math.sinh(beta * J) ** 2 / (n - 1), rel=1e-10)


def test_closed_form_value():
    assert ising_correction_closed_form(2, 1.0, 1.0) == pytest.approx(2 * math.sinh(1.0) ** 2, rel=1e-15)
    assert ising_correction_closed_form(2, 1.0, 1.0) == pytest.approx(2.7622, abs=1e-4)
    with pytest.raises(ValueError):
        ising_correction_closed_form(1, 1.0, 1.0)


@pytest.mark.parametrize("N", [4, 8, 12])
def test_free_chain_correction_uses_bond_count(N):
    J, beta = 1.0, 0.6
    rep = gtu_bound(ising_chain(N, J, "free"), beta)
    assert rep.correction == pytest.approx(2 * math.sinh(beta * J) ** 2 / (N - 2), abs=1e-10)


def test_bessel_two_level(two_lvl):
    est = locally_unbiased_estimator(two_lvl, LN3)
    rep = bessel_bound(est, two_lvl, LN3, 1)
    assert rep.bound_terms[0] == pytest.approx(0.0, abs=1e-15)
    assert rep.bound_terms[1] == pytest.approx(16 / 3, rel=1e-12)
    assert rep.partial_sums[-1] == pytest.approx(rep.variance, rel=1e-12)


def test_bessel_constant_estimator(three_lvl):
    rep = bessel_bound(Estimator([0.7, 0.7, 0.7]), three_lvl, 0.2, 2)
    np.testing.assert_allclose(rep.bound_terms, 0.0, atol=1e-30)
    assert rep.variance == pytest.approx(0.0, abs=1e-30)


def test_bessel_flags_degenerate_order(two_lvl):
    est = Estimator([1.0, -2.0, 0.5, 3.0])
    m = independent_bond_chain(3, 1.0)
    rep = bessel_bound(est, m, 0.4, 3)
    assert rep.skipped_orders == ()
    # a model whose levels coincide pairwise has a rank-deficient frame
    m = GibbsFamily([0.0, 0.0, 1.0, 1.0], base_weights=[1.0, 2.0, 1.0, 3.0])
    rep = bessel_bound(est, m, 0.4, 3)
    assert 2 in rep.skipped_orders and rep.degenerate
    assert rep.partial_sums[-1] <= rep.variance + 1e-10


def test_bessel_two_level_with_order_two_is_rejected(two_lvl):
    with pytest.raises(ValueError):
        bessel_bound(locally_unbiased_estimator(two_lvl, 0.1), two_lvl, 0.1, 2)


@settings(max_examples=100, deadline=None)
@given(seeds)
def test_bessel_monotone_and_parseval(seed):
    rng = np.random.default_rng(seed)
    m = random_model(rng)
    beta = rng.uniform(-3, 3)
    est = Estimator(rng.normal(size=m.n_levels))
    rep = bessel_bound(est, m, beta, m.n_levels - 1)
    assert np.all(np.diff(rep.partial_sums) >= 0)
    assert np.all(rep.partial_sums <= rep.variance + 1e-10)
    assert rep.partial_sums[-1] == pytest.approx(rep.variance, abs=1e-9)


def test_grid_single_point_is_locally_unbiased(three_lvl):
    g = grid_unbiased_estimator(three_lvl, [0.3], 0.3)
    loc = locally_unbiased_estimator(three_lvl, 0.3)
    np.testing.assert_allclose(g.values, loc.values, atol=1e-12)
    assert estimator_variance(g, thermal_state(three_lvl, 0.3)) >= tu_bound(three_lvl, 0.3) * (1 - 1e-12)


def test_grid_requires_beta0(three_lvl):
    with pytest.raises(ValueError):
        grid_unbiased_estimator(three_lvl, [0.1, 0.2], 0.3)


def test_grid_infeasible(three_lvl):
    with pytest.raises(InfeasibleConstraintsError) as info:
        grid_unbiased_estimator(three_lvl, [-1.0, 0.0, 0.3, 1.0, 2.0], 0.3)
    assert info.value.residual > 1e-8


def test_grid_constraints_hold(rng):
    m = random_model(rng, K=5)
    grid = [-0.5, 0.2, 1.0]
    est = grid_unbiased_estimator(m, grid, 0.2, local_order=2)
    assert est.construction == "grid_unbiased"
    assert est.constraint_residual <= 1e-8
    for b in grid:
        assert thermal_state(m, b).probabilities @ est.values == pytest.approx(b, abs=1e-8)
    assert covariance_check(est, m, 0.2) == pytest.approx(-1.0, abs=1e-8)


@settings(max_examples=50, deadline=None)
@given(seeds)
def test_grid_estimators_respect_bounds(seed):
    rng = np.random.default_rng(seed)
    m = random_model(rng, K=5)
    beta0 = rng.uniform(-1.5, 1.5)
    others = beta0 + rng.choice([-1, 1]) * rng.uniform(0.2, 1.0, 2) * np.array([1, -1])
    est = grid_unbiased_estimator(m, [beta0, *others], beta0, local_order=2)
    s = thermal_state(m, beta0)
    var = estimator_variance(est, s)
    rep = gtu_bound(m, s)
    assert var >= rep.tu_bound * (1 - 1e-8)
    assert var >= rep.gtu_bound - 1e-8


def test_correction_is_estimator_independent(rng):
    # the curvature correction depends only on moments; check across grid completions
    m = random_model(rng, K=6)
    beta0 = 0.4
    ref = gtu_bound(m, beta0)
    for _ in range(10):
        grid = [beta0, *(beta0 + rng.uniform(-1, 1, 2))]
        est = grid_unbiased_estimator(m, grid, beta0, local_order=2)
        rep = bessel_bound(est, m, beta0, 2)
        assert rep.correction == ref.correction
        assert rep.bound_terms[1] == pytest.approx(ref.bound_terms[1], rel=1e-9)
        assert rep.bound_terms[2] == pytest.approx(ref.bound_terms[2], rel=1e-7, abs=1e-10)
