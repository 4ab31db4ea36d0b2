import numpy as np
import pytest

from slewind.closed_forms import schramm_probability, simmons_cardy_two_point
from slewind.sle_mc import (Estimate, McConfig, ResolutionError, estimate_near_passage, estimate_pattern,
                            estimate_patterns, simulate_side, with_workers)
from slewind.winding import WindingPattern


def test_config_validation():
    with pytest.raises(ValueError):
        McConfig(n_samples=0)
    with pytest.raises(ValueError):
        McConfig(kappa=6.0)
    with pytest.raises(ValueError):
        McConfig(dt=-1.0)


def test_bernoulli_estimate():
    e = Estimate.bernoulli(25, 100, seed=3)
    assert e.mean == 0.25 and e.std_err == pytest.approx(np.sqrt(0.25 * 0.75 / 100))


def test_deterministic_for_seed_and_independent_of_workers():
    cfg = McConfig(n_samples=3000, block_size=1000, seed=11)
    a, _ = simulate_side([1 + 1j], cfg)
    b, _ = simulate_side([1 + 1j], cfg)
    c, _ = simulate_side([1 + 1j], with_workers(cfg, 2))
    np.testing.assert_array_equal(a, b)
    np.testing.assert_array_equal(a, c)
    d, _ = simulate_side([1 + 1j], McConfig(n_samples=3000, block_size=1000, seed=12))
    assert not np.array_equal(a, d)


def test_patterns_partition_samples():
    cfg = McConfig(n_samples=4000, seed=2)
    ests = estimate_patterns([1 + 1j, -0.5 + 0.7j], cfg)
    assert len(ests) == 4
    assert sum(e.mean for e in ests) == pytest.approx(1 - ests[0].excluded / cfg.n_samples, abs=1e-12)


def test_one_point_against_schramm():
    z = -0.4 + 0.8j
    est = estimate_pattern([z], WindingPattern(1, 1), McConfig(n_samples=20_000, seed=5))
    assert est.excluded == 0
    assert abs(est.mean - schramm_probability(z)) < 4 * est.std_err


def test_one_point_other_kappa():
    z = 1 + 0.5j
    est = estimate_pattern([z], WindingPattern(1, 1), McConfig(kappa=3.5, n_samples=20_000, seed=9))
    assert abs(est.mean - schramm_probability(z, 3.5)) < 4 * est.std_err


def test_two_point_against_simmons_cardy():
    est = estimate_pattern([1j, 2j], WindingPattern(3, 2), McConfig(n_samples=20_000, seed=4))
    assert abs(est.mean - simmons_cardy_two_point(1j, 2j)) < 4 * est.std_err


def test_near_passage_monotone_in_eps():
    ests = estimate_near_passage(1j, [0.4, 0.2, 0.1], McConfig(n_samples=5000, seed=1))
    means = [e.mean for e in ests]
    assert means[0] >= means[1] >= means[2] > 0


def test_near_passage_input_checks():
    with pytest.raises(ValueError):
        estimate_near_passage(1j, [1.5])
    with pytest.raises(ValueError):
        estimate_near_passage(1j, [])
    with pytest.raises(ResolutionError):
        estimate_near_passage(1j, [0.01], McConfig(adaptive=False, dt=1e-3))


@pytest.mark.parametrize("z", [0.5 + 4j, -3 + 4j])
def test_high_points_resolve(z):
    est = estimate_patterns([z], McConfig(n_samples=4000, seed=1))[1]
    assert est.excluded / est.n < 1e-3


@pytest.mark.slow
def test_step_refinement_within_error():
    base = McConfig(n_samples=100_000, seed=3)
    a = estimate_patterns([1 + 1j], base)[1]
    b = estimate_patterns([1 + 1j], McConfig(n_samples=100_000, seed=3, dt_scale=base.dt_scale / 2))[1]
    assert abs(a.mean - b.mean) < a.std_err
