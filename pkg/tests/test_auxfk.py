"""Pair-state bootstrap reformulation coupled against the auxiliary filter."""

import numpy as np
import pytest

from alvar.auxfk import ExtendedModel, PairCloud, bootstrap_init, bootstrap_step, extend
from alvar.model import DegeneracyError
from alvar.models import LgParams, SvParams, bootstrap_model, kalman_filter, simulate_ssm
from alvar.smc import apf_step, init_filter
from helpers import toy_model


def run_coupled(model, n, steps, seed, log_weight_atol=1e-12):
    """Run the auxiliary filter and the pair-state bootstrap on one stream.

    Asserts, at every step, identical ancestor indices, bitwise identical
    particle positions, and pair weights matching auxiliary weight times
    adjustment within ``log_weight_atol`` in the log domain.
    """
    ext = extend(model)
    rng_a = np.random.default_rng(seed)
    rng_b = np.random.default_rng(seed)
    cloud = init_filter(model, n, rng_a)
    pair = bootstrap_init(ext, n, rng_b)

    np.testing.assert_array_equal(pair.cur, cloud.particles)
    np.testing.assert_array_equal(pair.prev, cloud.particles)
    expected = cloud.log_weights + model.eval_log_adjustment(0, cloud.particles)
    np.testing.assert_allclose(pair.log_weights, expected, rtol=0, atol=log_weight_atol)

    for _ in range(steps):
        parents = cloud.particles
        cloud = apf_step(model, cloud, rng_a)
        pair = bootstrap_step(ext, pair, rng_b)
        np.testing.assert_array_equal(pair.ancestors, cloud.ancestors)
        np.testing.assert_array_equal(pair.cur, cloud.particles)
        np.testing.assert_array_equal(pair.prev, parents[cloud.ancestors])
        expected = cloud.log_weights + model.eval_log_adjustment(
            cloud.time, cloud.particles
        )
        np.testing.assert_allclose(
            pair.log_weights, expected, rtol=0, atol=log_weight_atol
        )

    # both algorithms consumed exactly the same number of variates
    assert rng_a.random() == rng_b.random()


def test_coupling_bootstrap_sv():
    p = SvParams()
    _, obs = simulate_ssm(p, 50, np.random.default_rng(100))
    model = bootstrap_model(p, obs)
    for n in (16, 256):
        # no adjustment: the pair weight reduces to the auxiliary weight,
        # so the match is bitwise
        run_coupled(model, n, 50, seed=7, log_weight_atol=0.0)


def test_coupling_bootstrap_lg():
    p = LgParams()
    _, obs = simulate_ssm(p, 50, np.random.default_rng(101))
    model = bootstrap_model(p, obs)
    for n in (16, 256):
        run_coupled(model, n, 50, seed=8, log_weight_atol=0.0)


def test_coupling_adjusted_model():
    model = toy_model(adjusted=True)
    run_coupled(model, 64, 30, seed=9)


def test_potential_reduces_to_transition_weight_without_adjustment():
    model = toy_model(adjusted=False)
    ext = extend(model)
    rng = np.random.default_rng(4)
    prev = rng.normal(size=20)
    cur = rng.normal(size=20)
    np.testing.assert_array_equal(
        ext.log_potential(3, prev, cur), model.log_transition_weight(2, prev, cur)
    )
    np.testing.assert_array_equal(
        ext.log_initial_potential(cur), model.log_initial_weight(cur)
    )


def test_potential_folds_adjustment_ratio():
    model = toy_model(adjusted=True)
    ext = extend(model)
    rng = np.random.default_rng(5)
    prev = rng.normal(size=10)
    cur = rng.normal(size=10)
    expected = (
        model.log_transition_weight(1, prev, cur)
        + model.log_adjustment(2, cur)
        - model.log_adjustment(1, prev)
    )
    np.testing.assert_allclose(ext.log_potential(2, prev, cur), expected, rtol=1e-15)


def test_potential_rejects_time_zero():
    ext = extend(toy_model())
    with pytest.raises(ValueError):
        ext.log_potential(0, np.zeros(2), np.zeros(2))


def test_pair_cloud_validation():
    with pytest.raises(ValueError):
        PairCloud(
            time=0,
            prev=np.zeros(3),
            cur=np.zeros(2),
            log_weights=np.zeros(2),
            ancestors=np.arange(2),
        )
    with pytest.raises(DegeneracyError):
        PairCloud(
            time=1,
            prev=np.zeros(2),
            cur=np.zeros(2),
            log_weights=np.full(2, -np.inf),
            ancestors=np.arange(2),
        )


def test_extended_projection_matches_reference_filter():
    # the current-coordinate marginal of the pair flow is the plain
    # filter law; on the linear Gaussian model the exact posterior mean
    # is available, so compare against it with a Monte Carlo allowance
    p = LgParams()
    _, obs = simulate_ssm(p, 30, np.random.default_rng(2))
    reference = kalman_filter(p, obs)
    ext = extend(bootstrap_model(p, obs))
    n = 20_000
    rng = np.random.default_rng(77)
    pair = bootstrap_init(ext, n, rng)
    for _ in range(30):
        pair = bootstrap_step(ext, pair, rng)
        w = np.exp(pair.log_weights - pair.log_weights.max())
        w /= w.sum()
        mean = float(np.dot(w, pair.cur))
        # allowance: 6 standard errors with a factor-3 variance inflation
        # budget for the resampling history
        bound = 6.0 * np.sqrt(3.0 * reference.variances[pair.time] / n)
        assert abs(mean - reference.means[pair.time]) < bound


def test_second_coordinate_law_matches_filter_across_seeds():
    scipy_stats = pytest.importorskip("scipy.stats")
    p = SvParams()
    _, obs = simulate_ssm(p, 5, np.random.default_rng(55))
    model = bootstrap_model(p, obs)
    ext = extend(model)
    n = 10_000

    rng_a = np.random.default_rng(1000)
    cloud = init_filter(model, n, rng_a)
    for _ in range(5):
        cloud = apf_step(model, cloud, rng_a)

    rng_b = np.random.default_rng(2000)
    pair = bootstrap_init(ext, n, rng_b)
    for _ in range(5):
        pair = bootstrap_step(ext, pair, rng_b)

    # raw positions after a step share one law across both algorithms
    result = scipy_stats.ks_2samp(cloud.particles, pair.cur)
    assert result.pvalue > 1e-3


def test_extended_model_is_thin_wrapper():
    model = toy_model()
    ext = extend(model)
    assert isinstance(ext, ExtendedModel)
    assert ext.base is model
