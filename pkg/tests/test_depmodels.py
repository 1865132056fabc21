"""Dependence model simulator and theta sweep tests."""

import numpy as np
import pytest

from sbergsma import (
    DependenceSpec,
    ReferenceDistribution,
    linear_chain,
    monte_carlo_null,
    row_standardize,
    simulate_panel,
    theta_sweep,
)
from sbergsma.exceptions import InvalidParameterError
from sbergsma.rng import stream

NORMAL = ReferenceDistribution("normal")


@pytest.fixture(scope="module")
def w_chain6():
    return row_standardize(linear_chain(6))


@pytest.mark.parametrize("model", ["SMA", "SAR"])
def test_theta_zero_is_raw_noise(model, w_chain6):
    spec = DependenceSpec(model, 0.0, w_chain6)
    panel = simulate_panel(spec, T=25, seed=4)
    raw = NORMAL.sample((25, 6), stream(4))
    assert np.array_equal(panel.data, raw)


def test_sma_interior_variance(w_chain6):
    # interior region: y = eps + theta/2 (eps_left + eps_right),
    # so Var(y) = 1 + theta^2 / 2
    theta = 0.6
    spec = DependenceSpec("SMA", theta, w_chain6)
    panel = simulate_panel(spec, T=100_000, seed=11)
    v = panel.data[:, 2].var()
    target = 1 + theta**2 / 2
    # variance of a sample variance of normals is about 2 sigma^4 / n
    se = np.sqrt(2.0 / 100_000) * target
    assert abs(v - target) < 3 * se


def test_sar_admissibility_bounds(w_chain6):
    with pytest.raises(InvalidParameterError):
        DependenceSpec("SAR", 1.0, w_chain6)
    with pytest.raises(InvalidParameterError):
        DependenceSpec("SAR", -1.2, w_chain6)
    # SMA has no such restriction
    DependenceSpec("SMA", 1.5, w_chain6)


def test_sar_near_unit_theta_warns():
    W = row_standardize(linear_chain(14))
    spec = DependenceSpec("SAR", 0.999, W)
    with pytest.warns(RuntimeWarning, match="conditioned"):
        simulate_panel(spec, T=5, seed=0)


def test_bad_model_and_theta(w_chain6):
    with pytest.raises(InvalidParameterError):
        DependenceSpec("CAR", 0.1, w_chain6)
    with pytest.raises(InvalidParameterError):
        DependenceSpec("SMA", float("nan"), w_chain6)
    with pytest.raises(InvalidParameterError):
        simulate_panel(DependenceSpec("SMA", 0.1, w_chain6), T=2)


def test_simulate_deterministic(w_chain6):
    spec = DependenceSpec("SAR", 0.4, w_chain6)
    a = simulate_panel(spec, T=20, seed=7)
    b = simulate_panel(spec, T=20, seed=7)
    c = simulate_panel(spec, T=20, seed=8)
    assert np.array_equal(a.data, b.data)
    assert not np.array_equal(a.data, c.data)


def test_sweep_theta_zero_matches_monte_carlo_null(w_chain6):
    T, reps, seed = 15, 120, 3
    sweep = theta_sweep("SMA", w_chain6, [0.0, 0.4], T=T, reps=reps, seed=seed)
    null = monte_carlo_null(NORMAL, 6, T, w_chain6, reps=reps, seed=seed)
    assert np.array_equal(T * sweep.samples[0.0], null.samples)


def test_sweep_mean_increases_with_theta(w_chain6):
    sweep = theta_sweep("SMA", w_chain6, [0.0, 0.3, 0.6], T=40, reps=400, seed=5)
    means = [sweep.summaries[t][0] for t in sweep.thetas]
    assert means[0] < means[1] < means[2]


def test_sweep_summaries_match_samples(w_chain6):
    sweep = theta_sweep("SAR", w_chain6, [0.2], T=20, reps=200, seed=9)
    vals = sweep.samples[0.2]
    mean, sd, _, _ = sweep.summaries[0.2]
    assert mean == pytest.approx(vals.mean(), rel=1e-12)
    assert sd == pytest.approx(vals.std(), rel=1e-12)
